#pragma once

#include "fairmatch/rational.hpp"

#include <vector>

namespace fairmatch {

/// Exact rational max-flow (Edmonds-Karp).
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes);
  /// Returns the edge id.
  int add_edge(int from, int to, const Prob& capacity);
  Prob max_flow(int source, int sink);
  const Prob& flow_on(int edge) const { return edges_[edge].flow; }

 private:
  struct Edge {
    int to;
    Prob cap;
    Prob flow;
  };
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

}  // namespace fairmatch
