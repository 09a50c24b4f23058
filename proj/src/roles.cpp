#include "osn/roles.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "osn/error.hpp"

namespace osn {

std::string_view to_string(NodeRole role) {
    switch (role) {
        case NodeRole::core: return "core";
        case NodeRole::tentacle_inner: return "tentacle";
        case NodeRole::loner: return "loner";
        case NodeRole::fiber_inner: return "fiber";
    }
    return "?";
}

NodeRole parse_role(std::string_view text) {
    if (text == "core") return NodeRole::core;
    if (text == "tentacle") return NodeRole::tentacle_inner;
    if (text == "loner") return NodeRole::loner;
    if (text == "fiber") return NodeRole::fiber_inner;
    throw ParseError("unknown role '" + std::string(text) + "'");
}

void write_roles(std::ostream& out, const Graph& g, const std::vector<NodeRole>& roles) {
    for (NodeId v = 0; v < roles.size(); ++v) out << g.label(v) << ' ' << to_string(roles[v]) << '\n';
}

std::vector<std::pair<std::string, NodeRole>> read_roles(std::istream& in) {
    std::vector<std::pair<std::string, NodeRole>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::string label, role, extra;
        if (!(fields >> label >> role) || (fields >> extra)) {
            throw ParseError("expected 'label role'", line_no);
        }
        try {
            out.emplace_back(label, parse_role(role));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return out;
}

}  // namespace osn
