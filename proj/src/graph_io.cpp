#include "tagnet/graph_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "tagnet/errors.hpp"

namespace tagnet {

namespace {

std::vector<EdgeId> sorted_edge_ids(const WeightedGraph& g) {
    std::vector<EdgeId> ids(g.edge_count());
    for (EdgeId e = 0; e < ids.size(); ++e) ids[e] = e;
    std::sort(ids.begin(), ids.end(), [&](EdgeId a, EdgeId b) {
        const Edge& ea = g.edge(a);
        const Edge& eb = g.edge(b);
        if (ea.u != eb.u) return ea.u < eb.u;
        return ea.v < eb.v;
    });
    return ids;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string xml_unescape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        auto matches = [&](const char* entity) {
            return s.compare(i, std::string::traits_type::length(entity), entity) == 0;
        };
        if (matches("&amp;")) { out.push_back('&'); i += 5; }
        else if (matches("&lt;")) { out.push_back('<'); i += 4; }
        else if (matches("&gt;")) { out.push_back('>'); i += 4; }
        else if (matches("&quot;")) { out.push_back('"'); i += 6; }
        else if (matches("&apos;")) { out.push_back('\''); i += 6; }
        else out.push_back(s[i++]);
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_graphml(std::ostream& out, const WeightedGraph& g, const GraphAnnotations& ann) {
    const bool has_eigen = !ann.eigenvector.empty();
    const bool has_vbet = !ann.vertex_betweenness.empty();
    const bool has_comm = !ann.community.empty();
    const bool has_area = !ann.area.empty();
    const bool has_ebet = !ann.edge_betweenness.empty();

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    out << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
    out << "  <key id=\"frequency\" for=\"node\" attr.name=\"frequency\" attr.type=\"long\"/>\n";
    if (has_eigen)
        out << "  <key id=\"eigenvector\" for=\"node\" attr.name=\"eigenvector\""
               " attr.type=\"double\"/>\n";
    if (has_vbet)
        out << "  <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\""
               " attr.type=\"double\"/>\n";
    if (has_comm)
        out << "  <key id=\"community\" for=\"node\" attr.name=\"community\""
               " attr.type=\"long\"/>\n";
    if (has_area)
        out << "  <key id=\"area\" for=\"node\" attr.name=\"area\" attr.type=\"string\"/>\n";
    out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n";
    if (has_ebet)
        out << "  <key id=\"edge_betweenness\" for=\"edge\" attr.name=\"edge_betweenness\""
               " attr.type=\"double\"/>\n";
    out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";

    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const Vertex& vert = g.vertex(v);
        out << "    <node id=\"n" << v << "\">";
        out << "<data key=\"label\">" << xml_escape(vert.label) << "</data>";
        out << "<data key=\"frequency\">" << vert.frequency << "</data>";
        if (has_eigen)
            out << "<data key=\"eigenvector\">" << format_double(ann.eigenvector[v])
                << "</data>";
        if (has_vbet)
            out << "<data key=\"betweenness\">" << format_double(ann.vertex_betweenness[v])
                << "</data>";
        if (has_comm) out << "<data key=\"community\">" << ann.community[v] << "</data>";
        if (has_area) out << "<data key=\"area\">" << xml_escape(ann.area[v]) << "</data>";
        out << "</node>\n";
    }
    for (EdgeId e : sorted_edge_ids(g)) {
        const Edge& edge = g.edge(e);
        out << "    <edge source=\"n" << edge.u << "\" target=\"n" << edge.v << "\">";
        out << "<data key=\"weight\">" << edge.weight << "</data>";
        if (has_ebet)
            out << "<data key=\"edge_betweenness\">" << format_double(ann.edge_betweenness[e])
                << "</data>";
        out << "</edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

void write_dot(std::ostream& out, const WeightedGraph& g, const GraphAnnotations& ann) {
    out << "graph hashtags {\n";
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const Vertex& vert = g.vertex(v);
        out << "  n" << v << " [label=\"" << dot_escape(vert.label) << "\""
            << ", frequency=" << vert.frequency;
        if (!ann.eigenvector.empty())
            out << ", eigenvector=" << format_double(ann.eigenvector[v]);
        if (!ann.vertex_betweenness.empty())
            out << ", betweenness=" << format_double(ann.vertex_betweenness[v]);
        if (!ann.community.empty()) out << ", community=" << ann.community[v];
        if (!ann.area.empty()) out << ", area=\"" << dot_escape(ann.area[v]) << "\"";
        out << "];\n";
    }
    for (EdgeId e : sorted_edge_ids(g)) {
        const Edge& edge = g.edge(e);
        out << "  n" << edge.u << " -- n" << edge.v << " [weight=" << edge.weight;
        if (!ann.edge_betweenness.empty())
            out << ", edge_betweenness=" << format_double(ann.edge_betweenness[e]);
        out << "];\n";
    }
    out << "}\n";
}

void write_edge_csv(std::ostream& out, const WeightedGraph& g, const GraphAnnotations& ann) {
    out << "u,v,weight,edge_betweenness\n";
    for (EdgeId e : sorted_edge_ids(g)) {
        const Edge& edge = g.edge(e);
        out << csv_escape(g.vertex(edge.u).label) << ',' << csv_escape(g.vertex(edge.v).label)
            << ',' << edge.weight << ',';
        if (!ann.edge_betweenness.empty()) out << format_double(ann.edge_betweenness[e]);
        out << '\n';
    }
}

void write_centrality_csv(std::ostream& out, const WeightedGraph& g,
                          const GraphAnnotations& ann) {
    out << "label,frequency,eigenvector,betweenness";
    if (!ann.area.empty()) out << ",area";
    out << '\n';
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const Vertex& vert = g.vertex(v);
        out << csv_escape(vert.label) << ',' << vert.frequency << ',';
        if (!ann.eigenvector.empty()) out << format_double(ann.eigenvector[v]);
        out << ',';
        if (!ann.vertex_betweenness.empty()) out << format_double(ann.vertex_betweenness[v]);
        if (!ann.area.empty()) out << ',' << csv_escape(ann.area[v]);
        out << '\n';
    }
}

void write_graph_json(std::ostream& out, const WeightedGraph& g, const GraphAnnotations& ann) {
    // Hand-rolled so field order and float formatting stay fixed.
    auto json_escape = [](const std::string& s) {
        std::string r;
        for (char c : s) {
            switch (c) {
                case '"': r += "\\\""; break;
                case '\\': r += "\\\\"; break;
                case '\n': r += "\\n"; break;
                case '\r': r += "\\r"; break;
                case '\t': r += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        r += buf;
                    } else {
                        r.push_back(c);
                    }
            }
        }
        return r;
    };
    out << "{\n  \"directed\": false,\n  \"nodes\": [\n";
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const Vertex& vert = g.vertex(v);
        out << "    {\"id\": " << v << ", \"label\": \"" << json_escape(vert.label)
            << "\", \"frequency\": " << vert.frequency;
        if (!ann.eigenvector.empty())
            out << ", \"eigenvector\": " << format_double(ann.eigenvector[v]);
        if (!ann.vertex_betweenness.empty())
            out << ", \"betweenness\": " << format_double(ann.vertex_betweenness[v]);
        if (!ann.community.empty()) out << ", \"community\": " << ann.community[v];
        if (!ann.area.empty()) out << ", \"area\": \"" << json_escape(ann.area[v]) << "\"";
        out << "}" << (v + 1 < g.vertex_count() ? "," : "") << "\n";
    }
    out << "  ],\n  \"edges\": [\n";
    const auto ids = sorted_edge_ids(g);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const Edge& edge = g.edge(ids[i]);
        out << "    {\"source\": " << edge.u << ", \"target\": " << edge.v
            << ", \"weight\": " << edge.weight;
        if (!ann.edge_betweenness.empty())
            out << ", \"edge_betweenness\": " << format_double(ann.edge_betweenness[ids[i]]);
        out << "}" << (i + 1 < ids.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
}

namespace {

// Minimal scanner for the GraphML subset this library writes.
struct XmlElement {
    std::string name;
    std::map<std::string, std::string> attributes;
    bool self_closing = false;
    bool closing = false;
};

class XmlScanner {
public:
    explicit XmlScanner(std::istream& in) {
        std::ostringstream buffer;
        buffer << in.rdbuf();
        text_ = buffer.str();
    }

    // Advances to the next tag; returns false at end of input.
    bool next(XmlElement& element) {
        for (;;) {
            const std::size_t lt = text_.find('<', pos_);
            if (lt == std::string::npos) return false;
            const std::size_t gt = text_.find('>', lt);
            if (gt == std::string::npos) throw input_error("graphml: unterminated tag");
            pos_ = gt + 1;
            std::string body = text_.substr(lt + 1, gt - lt - 1);
            if (body.rfind("?", 0) == 0 || body.rfind("!", 0) == 0) continue;  // prolog
            element = parse_element(body);
            return true;
        }
    }

    // Text between the current position and the next '<'.
    std::string text_content() {
        const std::size_t lt = text_.find('<', pos_);
        const std::size_t end = lt == std::string::npos ? text_.size() : lt;
        std::string content = text_.substr(pos_, end - pos_);
        pos_ = end;
        return content;
    }

private:
    static XmlElement parse_element(std::string body) {
        XmlElement element;
        if (!body.empty() && body.back() == '/') {
            element.self_closing = true;
            body.pop_back();
        }
        std::size_t i = 0;
        if (!body.empty() && body[0] == '/') {
            element.closing = true;
            i = 1;
        }
        while (i < body.size() && !isspace(static_cast<unsigned char>(body[i]))) {
            element.name.push_back(body[i++]);
        }
        while (i < body.size()) {
            while (i < body.size() && isspace(static_cast<unsigned char>(body[i]))) ++i;
            if (i >= body.size()) break;
            std::string key;
            while (i < body.size() && body[i] != '=' &&
                   !isspace(static_cast<unsigned char>(body[i]))) {
                key.push_back(body[i++]);
            }
            while (i < body.size() && (body[i] == '=' ||
                                       isspace(static_cast<unsigned char>(body[i])))) {
                ++i;
            }
            if (i >= body.size() || body[i] != '"') {
                throw input_error("graphml: malformed attribute near \"" + body + "\"");
            }
            ++i;
            std::string value;
            while (i < body.size() && body[i] != '"') value.push_back(body[i++]);
            if (i >= body.size()) throw input_error("graphml: unterminated attribute value");
            ++i;
            element.attributes.emplace(std::move(key), xml_unescape(value));
        }
        return element;
    }

    std::string text_;
    std::size_t pos_ = 0;
};

std::uint32_t parse_u32(const std::string& s, const char* what) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') {
        throw input_error(std::string("invalid ") + what + ": \"" + s + "\"");
    }
    return static_cast<std::uint32_t>(v);
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') {
        throw input_error(std::string("invalid ") + what + ": \"" + s + "\"");
    }
    return v;
}

double parse_f64(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw input_error(std::string("invalid ") + what + ": \"" + s + "\"");
    }
    return v;
}

}  // namespace

ImportedGraph read_graphml(std::istream& in) {
    XmlScanner scanner(in);
    XmlElement element;

    struct NodeRecord {
        std::string xml_id;
        std::map<std::string, std::string> data;
    };
    struct EdgeRecord {
        std::string source, target;
        std::map<std::string, std::string> data;
    };
    std::vector<NodeRecord> nodes;
    std::vector<EdgeRecord> edges;
    std::map<std::string, std::string> key_names;  // key id -> attr.name

    while (scanner.next(element)) {
        if (element.closing) continue;
        if (element.name == "key") {
            key_names[element.attributes["id"]] = element.attributes["attr.name"];
        } else if (element.name == "node") {
            NodeRecord node;
            node.xml_id = element.attributes["id"];
            if (!element.self_closing) {
                XmlElement inner;
                while (scanner.next(inner)) {
                    if (inner.closing && inner.name == "node") break;
                    if (inner.name == "data" && !inner.closing) {
                        const std::string key = key_names[inner.attributes["key"]];
                        node.data[key] = xml_unescape(scanner.text_content());
                    }
                }
            }
            nodes.push_back(std::move(node));
        } else if (element.name == "edge") {
            EdgeRecord edge;
            edge.source = element.attributes["source"];
            edge.target = element.attributes["target"];
            if (!element.self_closing) {
                XmlElement inner;
                while (scanner.next(inner)) {
                    if (inner.closing && inner.name == "edge") break;
                    if (inner.name == "data" && !inner.closing) {
                        const std::string key = key_names[inner.attributes["key"]];
                        edge.data[key] = xml_unescape(scanner.text_content());
                    }
                }
            }
            edges.push_back(std::move(edge));
        }
    }

    ImportedGraph result;
    std::map<std::string, VertexId> vertex_of;
    const bool any_eigen = std::any_of(nodes.begin(), nodes.end(), [](const NodeRecord& n) {
        return n.data.contains("eigenvector");
    });
    const bool any_vbet = std::any_of(nodes.begin(), nodes.end(), [](const NodeRecord& n) {
        return n.data.contains("betweenness");
    });
    const bool any_comm = std::any_of(nodes.begin(), nodes.end(), [](const NodeRecord& n) {
        return n.data.contains("community");
    });
    const bool any_area = std::any_of(nodes.begin(), nodes.end(), [](const NodeRecord& n) {
        return n.data.contains("area");
    });

    for (const NodeRecord& node : nodes) {
        auto it = node.data.find("label");
        if (it == node.data.end()) {
            throw input_error("graphml: node \"" + node.xml_id + "\" has no label");
        }
        std::uint64_t freq = 0;
        if (auto f = node.data.find("frequency"); f != node.data.end()) {
            freq = parse_u64(f->second, "frequency");
        }
        const VertexId v = result.graph.add_vertex(it->second, freq);
        vertex_of[node.xml_id] = v;
        if (any_eigen) {
            result.annotations.eigenvector.push_back(
                node.data.contains("eigenvector")
                    ? parse_f64(node.data.at("eigenvector"), "eigenvector") : 0.0);
        }
        if (any_vbet) {
            result.annotations.vertex_betweenness.push_back(
                node.data.contains("betweenness")
                    ? parse_f64(node.data.at("betweenness"), "betweenness") : 0.0);
        }
        if (any_comm) {
            result.annotations.community.push_back(
                node.data.contains("community")
                    ? parse_u32(node.data.at("community"), "community") : 0);
        }
        if (any_area) {
            result.annotations.area.push_back(
                node.data.contains("area") ? node.data.at("area") : std::string());
        }
    }

    const bool any_ebet = std::any_of(edges.begin(), edges.end(), [](const EdgeRecord& e) {
        return e.data.contains("edge_betweenness");
    });
    for (const EdgeRecord& edge : edges) {
        auto su = vertex_of.find(edge.source);
        auto sv = vertex_of.find(edge.target);
        if (su == vertex_of.end() || sv == vertex_of.end()) {
            throw input_error("graphml: edge references unknown node \"" +
                              (su == vertex_of.end() ? edge.source : edge.target) + "\"");
        }
        std::uint64_t weight = 1;
        if (auto w = edge.data.find("weight"); w != edge.data.end()) {
            weight = parse_u64(w->second, "weight");
        }
        result.graph.upsert_edge(su->second, sv->second, weight);
        if (any_ebet) {
            result.annotations.edge_betweenness.push_back(
                edge.data.contains("edge_betweenness")
                    ? parse_f64(edge.data.at("edge_betweenness"), "edge_betweenness") : 0.0);
        }
    }
    return result;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    quoted = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
        } else if (c == '"') {
            if (!field.empty()) {
                throw input_error("csv line " + std::to_string(line_no) +
                                  ": stray quote in field");
            }
            quoted = true;
            ++i;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            ++i;
        } else {
            field.push_back(c);
            ++i;
        }
    }
    if (quoted) {
        throw input_error("csv line " + std::to_string(line_no) + ": unterminated quote");
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

ImportedGraph read_edge_csv(std::istream& in) {
    ImportedGraph result;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool any_ebet = false;
    std::map<std::string, VertexId> vertex_of;
    auto intern = [&](const std::string& label) {
        auto it = vertex_of.find(label);
        if (it != vertex_of.end()) return it->second;
        const VertexId v = result.graph.add_vertex(label, 0);
        vertex_of.emplace(label, v);
        return v;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;  // "u,v,weight[,edge_betweenness]"
            continue;
        }
        const auto fields = split_csv_line(line, line_no);
        if (fields.size() < 3) {
            throw input_error("csv line " + std::to_string(line_no) +
                              ": expected u,v,weight[,edge_betweenness]");
        }
        const VertexId u = intern(fields[0]);
        const VertexId v = intern(fields[1]);
        result.graph.upsert_edge(u, v, parse_u64(fields[2], "weight"));
        if (fields.size() >= 4 && !fields[3].empty()) {
            any_ebet = true;
            result.annotations.edge_betweenness.push_back(
                parse_f64(fields[3], "edge_betweenness"));
        } else {
            result.annotations.edge_betweenness.push_back(0.0);
        }
    }
    if (!any_ebet) result.annotations.edge_betweenness.clear();
    return result;
}

}  // namespace tagnet
