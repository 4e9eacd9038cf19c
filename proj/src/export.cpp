#include <cmath>
#include <map>
#include <sstream>

#include "kitchen/harness.hpp"

namespace kitchen {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

NetFormat parse_net_format(std::string_view tag) {
  if (tag == "graphml") return NetFormat::GraphML;
  if (tag == "dot") return NetFormat::Dot;
  throw std::invalid_argument("unsupported network format '" + std::string(tag) + "' (use graphml or dot)");
}

std::string to_graphml(const CollaborationNetwork& net) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"specialty\" for=\"node\" attr.name=\"specialty\" attr.type=\"string\"/>\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n"
      << "  <graph id=\"collaboration\" edgedefault=\"undirected\">\n";
  for (int i = 0; i < net.node_count(); ++i)
    out << "    <node id=\"n" << i << "\"><data key=\"specialty\">"
        << xml_escape(net.specialty[static_cast<std::size_t>(i)]) << "</data></node>\n";
  for (const auto& [edge, w] : net.weights)
    out << "    <edge source=\"n" << edge.first << "\" target=\"n" << edge.second << "\"><data key=\"weight\">" << w
        << "</data></edge>\n";
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string to_dot(const CollaborationNetwork& net) {
  std::ostringstream out;
  out << "graph collaboration {\n";
  for (int i = 0; i < net.node_count(); ++i)
    out << "  " << i << " [specialty=\"" << net.specialty[static_cast<std::size_t>(i)] << "\"];\n";
  for (const auto& [edge, w] : net.weights)
    out << "  " << edge.first << " -- " << edge.second << " [weight=" << w << "];\n";
  out << "}\n";
  return out.str();
}

std::string export_network(const EventLog& log, NetFormat format) {
  const auto net = build_network(log);
  return format == NetFormat::GraphML ? to_graphml(net) : to_dot(net);
}

}  // namespace kitchen
