#include "knotcert/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "knotcert/union_find.hpp"

namespace knotcert {

namespace {

class PdParser {
 public:
  explicit PdParser(std::string_view text) : text_(text) {}

  void parse(std::vector<Crossing>& crossings, std::vector<int>& loops) {
    skip_separators();
    if (at_end()) throw DiagramError("empty diagram text");
    while (!at_end()) {
      if (match_word("PD")) {
        expect('[');
        parse_items(crossings, loops, ']');
        expect(']');
      } else {
        parse_item(crossings, loops);
      }
      skip_separators();
    }
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void skip_separators() {
    while (!at_end() && (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == ',')) ++pos_;
  }

  bool match_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    std::size_t after = pos_ + w.size();
    if (after < text_.size() && std::isalpha(static_cast<unsigned char>(text_[after]))) return false;
    pos_ = after;
    return true;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DiagramError("PD syntax error at offset " + std::to_string(pos_) + ": " + what);
  }

  int parse_int() {
    skip_ws();
    std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_ || (pos_ == start + 1 && !std::isdigit(static_cast<unsigned char>(text_[start]))))
      fail("expected integer");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  static char closing(char open) { return open == '(' ? ')' : ']'; }

  std::vector<int> parse_args() {
    skip_ws();
    char open = peek();
    if (open != '(' && open != '[') fail("expected '(' or '['");
    ++pos_;
    std::vector<int> out;
    skip_ws();
    if (peek() != closing(open)) {
      for (;;) {
        out.push_back(parse_int());
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect(closing(open));
    return out;
  }

  void parse_items(std::vector<Crossing>& crossings, std::vector<int>& loops, char terminator) {
    skip_separators();
    while (!at_end() && peek() != terminator) {
      parse_item(crossings, loops);
      skip_separators();
    }
  }

  void parse_item(std::vector<Crossing>& crossings, std::vector<int>& loops) {
    if (match_word("X")) {
      auto args = parse_args();
      if (args.size() != 4)
        throw DiagramError("crossing must have exactly 4 ends, got " + std::to_string(args.size()));
      Crossing c;
      std::copy(args.begin(), args.end(), c.ends.begin());
      crossings.push_back(c);
    } else if (match_word("Loop") || match_word("L")) {
      auto args = parse_args();
      if (args.size() != 1) throw DiagramError("loop token takes exactly one label");
      loops.push_back(args[0]);
    } else {
      fail("expected X(...) or L[...]");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

LinkDiagram parse_json_diagram(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DiagramError(std::string("malformed JSON diagram: ") + e.what());
  }
  if (!j.is_object()) throw DiagramError("JSON diagram must be an object");
  std::vector<Crossing> crossings;
  std::vector<int> loops;
  int max_label = 0;
  if (j.contains("crossings")) {
    if (!j["crossings"].is_array()) throw DiagramError("\"crossings\" must be an array");
    for (const auto& jc : j["crossings"]) {
      if (!jc.is_object() || !jc.contains("ends") || !jc["ends"].is_array())
        throw DiagramError("each crossing needs an \"ends\" array");
      const auto& ends = jc["ends"];
      if (ends.size() != 4)
        throw DiagramError("crossing must have exactly 4 ends, got " + std::to_string(ends.size()));
      Crossing c;
      for (int i = 0; i < 4; ++i) {
        if (!ends[i].is_number_integer()) throw DiagramError("crossing ends must be integers");
        c.ends[i] = ends[i].get<int>();
        max_label = std::max(max_label, c.ends[i]);
      }
      if (jc.contains("labels")) {
        const auto& labels = jc["labels"];
        if (!labels.is_array() || labels.size() != 4) throw DiagramError("\"labels\" must list 4 entries");
        std::array<bool, 4> over{};
        for (int i = 0; i < 4; ++i) {
          auto s = labels[i].get<std::string>();
          if (s == "over" || s == "o")
            over[i] = true;
          else if (s == "under" || s == "u")
            over[i] = false;
          else
            throw DiagramError("crossing label must be over/under");
        }
        for (int i = 0; i < 4; ++i)
          if (over[i] == over[(i + 1) % 4]) throw DiagramError("over/under labels do not alternate");
        if (over[0]) std::rotate(c.ends.begin(), c.ends.begin() + 1, c.ends.end());
      }
      crossings.push_back(c);
    }
  }
  if (j.contains("loops")) {
    if (!j["loops"].is_number_integer() || j["loops"].get<int>() < 0)
      throw DiagramError("\"loops\" must be a nonnegative integer");
    int k = j["loops"].get<int>();
    for (int i = 0; i < k; ++i) loops.push_back(max_label + 1 + i);
  }
  return LinkDiagram(std::move(crossings), std::move(loops));
}

}  // namespace

LinkDiagram::LinkDiagram(std::vector<Crossing> crossings, std::vector<int> loop_labels)
    : crossings_(std::move(crossings)), loop_labels_(std::move(loop_labels)) {
  validate_and_derive();
}

EndRef LinkDiagram::partner(int crossing, int position) const {
  const auto& ends = arc_ends_[arc_at(crossing, position)];
  EndRef self{crossing, position};
  return ends[0] == self ? ends[1] : ends[0];
}

void LinkDiagram::validate_and_derive() {
  if (crossings_.empty() && loop_labels_.empty()) throw DiagramError("diagram has no components");
  const int n = num_crossings();
  std::map<int, std::vector<EndRef>> occurrences;
  for (int c = 0; c < n; ++c)
    for (int p = 0; p < 4; ++p) occurrences[crossings_[c].ends[p]].push_back({c, p});
  for (int label : loop_labels_)
    if (occurrences.count(label)) throw DiagramError("loop label " + std::to_string(label) + " reused by a crossing");

  arcs_.clear();
  arc_ends_.clear();
  end_arc_.assign(4 * n, -1);
  for (const auto& [label, refs] : occurrences) {
    if (refs.size() != 2)
      throw DiagramError("arc " + std::to_string(label) + " appears " + std::to_string(refs.size()) +
                         " times; every arc must join exactly two crossing ends");
    int idx = static_cast<int>(arcs_.size());
    arcs_.push_back(label);
    arc_ends_.push_back({refs[0], refs[1]});
    for (const auto& r : refs) end_arc_[r.crossing * 4 + r.position] = idx;
  }

  // Link components: strands pass straight through crossings (p <-> p+2).
  end_component_.assign(4 * n, -1);
  int comp = 0;
  for (int c = 0; c < n; ++c) {
    for (int p = 0; p < 4; ++p) {
      if (end_component_[c * 4 + p] >= 0) continue;
      EndRef cur{c, p};
      while (end_component_[cur.crossing * 4 + cur.position] < 0) {
        int opposite = (cur.position + 2) % 4;
        end_component_[cur.crossing * 4 + cur.position] = comp;
        end_component_[cur.crossing * 4 + opposite] = comp;
        cur = partner(cur.crossing, opposite);
      }
      ++comp;
    }
  }
  num_components_ = comp + num_loops();

  // Graph components and faces of the rotation system.
  UnionFind uf(std::max(n, 1));
  for (const auto& ends : arc_ends_) uf.unite(ends[0].crossing, ends[1].crossing);
  std::vector<int> roots;
  for (int c = 0; c < n; ++c) roots.push_back(uf.find(c));
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  const int graph_components = static_cast<int>(roots.size());
  num_diagram_components_ = graph_components + num_loops();

  faces_.clear();
  std::vector<char> used(4 * n, 0);
  for (int c = 0; c < n; ++c) {
    for (int p = 0; p < 4; ++p) {
      if (used[c * 4 + p]) continue;
      std::vector<EndRef> face;
      EndRef cur{c, p};
      while (!used[cur.crossing * 4 + cur.position]) {
        used[cur.crossing * 4 + cur.position] = 1;
        face.push_back(cur);
        EndRef arrive = partner(cur.crossing, cur.position);
        cur = {arrive.crossing, (arrive.position + 3) % 4};
      }
      faces_.push_back(std::move(face));
    }
  }
  // Euler's formula per component: V - E + F = 2 for every connected planar piece.
  const int vertices = n;
  const int edges = static_cast<int>(arcs_.size());
  const int faces = static_cast<int>(faces_.size());
  if (vertices - edges + faces != 2 * graph_components)
    throw DiagramError("diagram graph with the given cyclic orders is not planar");
}

std::string LinkDiagram::to_pd() const {
  std::ostringstream out;
  out << "PD[";
  bool first = true;
  for (const auto& c : crossings_) {
    if (!first) out << ',';
    first = false;
    out << "X(" << c.ends[0] << ',' << c.ends[1] << ',' << c.ends[2] << ',' << c.ends[3] << ')';
  }
  for (int label : loop_labels_) {
    if (!first) out << ',';
    first = false;
    out << "L[" << label << ']';
  }
  out << ']';
  return out.str();
}

std::string LinkDiagram::to_json() const {
  nlohmann::json j;
  j["crossings"] = nlohmann::json::array();
  for (const auto& c : crossings_) j["crossings"].push_back({{"ends", c.ends}});
  j["loops"] = num_loops();
  return j.dump();
}

LinkDiagram parse_diagram(std::string_view text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json_diagram(text);
  std::vector<Crossing> crossings;
  std::vector<int> loops;
  PdParser(text).parse(crossings, loops);
  return LinkDiagram(std::move(crossings), std::move(loops));
}

int crossing_measure(const LinkDiagram& d) { return d.num_crossings() + d.num_diagram_components() - 1; }

bool is_knot_diagram(const LinkDiagram& d) { return d.num_components() == 1; }

}  // namespace knotcert
