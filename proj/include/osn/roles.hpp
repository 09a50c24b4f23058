#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "osn/graph.hpp"

namespace osn {

/// Structural role of a node relative to the dense core.
enum class NodeRole : std::uint8_t {
    core,           ///< dense-core member that is not a fiber inner node
    tentacle_inner, ///< peeled chain node other than the loner
    loner,          ///< degree-1 terminal node of a tentacle
    fiber_inner,    ///< degree-2 node of a fiber inside the dense core
};

std::string_view to_string(NodeRole role);
NodeRole parse_role(std::string_view text);

inline bool in_dense_core(NodeRole role) {
    return role == NodeRole::core || role == NodeRole::fiber_inner;
}

/// Labels sidecar: one "label role" line per node, in node-index order.
/// The label column is the node's edge-list label, so the sidecar stays
/// aligned with the edge list after it is reloaded.
void write_roles(std::ostream& out, const Graph& g, const std::vector<NodeRole>& roles);
std::vector<std::pair<std::string, NodeRole>> read_roles(std::istream& in);

}  // namespace osn
