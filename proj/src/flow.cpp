#include "fairmatch/flow.hpp"

#include <queue>
#include <stdexcept>

namespace fairmatch {

FlowNetwork::FlowNetwork(int nodes) : adj_(nodes) {}

int FlowNetwork::add_edge(int from, int to, const Prob& capacity) {
  if (capacity < 0) throw std::invalid_argument("flow: negative capacity");
  int id = static_cast<int>(edges_.size());
  edges_.push_back(Edge{to, capacity, Prob(0)});
  adj_[from].push_back(id);
  edges_.push_back(Edge{from, Prob(0), Prob(0)});
  adj_[to].push_back(id + 1);
  return id;
}

Prob FlowNetwork::max_flow(int source, int sink) {
  Prob total = 0;
  const int n = static_cast<int>(adj_.size());
  while (true) {
    std::vector<int> via(n, -1);
    std::queue<int> q;
    q.push(source);
    std::vector<bool> seen(n, false);
    seen[source] = true;
    while (!q.empty() && !seen[sink]) {
      int u = q.front();
      q.pop();
      for (int id : adj_[u]) {
        const Edge& e = edges_[id];
        if (!seen[e.to] && e.cap - e.flow > 0) {
          seen[e.to] = true;
          via[e.to] = id;
          q.push(e.to);
        }
      }
    }
    if (!seen[sink]) break;
    Prob push;
    bool first = true;
    for (int v = sink; v != source; v = edges_[via[v] ^ 1].to) {
      const Edge& e = edges_[via[v]];
      Prob room = e.cap - e.flow;
      if (first || room < push) {
        push = room;
        first = false;
      }
    }
    for (int v = sink; v != source; v = edges_[via[v] ^ 1].to) {
      edges_[via[v]].flow += push;
      edges_[via[v] ^ 1].flow -= push;
    }
    total += push;
  }
  return total;
}

}  // namespace fairmatch
