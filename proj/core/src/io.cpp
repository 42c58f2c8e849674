#include "iic/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace iic {

using nlohmann::json;

MixedGraph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(Err::ParseError, std::string("graph JSON: ") + e.what());
  }
  if (!j.contains("n")) throw Error(Err::ParseError, "graph JSON: missing \"n\"");
  int n = j.at("n").get<int>();
  std::vector<DirectedEdge> d;
  std::vector<BidirectedEdge> b;
  for (const auto& e : j.value("directed", json::array()))
    d.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  for (const auto& e : j.value("bidirected", json::array()))
    b.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  std::map<NodeId, std::string> labels;
  if (j.contains("labels"))
    for (const auto& [k, v] : j.at("labels").items())
      labels[std::stoi(k)] = v.get<std::string>();
  return MixedGraph::build(n, std::move(d), std::move(b), std::move(labels));
}

std::string graph_to_json(const MixedGraph& g) {
  json j;
  j["n"] = g.n();
  auto d = json::array();
  for (const auto& [a, b] : g.directed()) d.push_back({a, b});
  j["directed"] = d;
  auto bi = json::array();
  for (const auto& [a, b] : g.bidirected()) bi.push_back({a, b});
  j["bidirected"] = bi;
  if (!g.labels().empty()) {
    json lab;
    for (const auto& [k, v] : g.labels()) lab[std::to_string(k)] = v;
    j["labels"] = lab;
  }
  return j.dump(2);
}

namespace {
NodeId resolve_node(const MixedGraph& g, const json& ref) {
  if (ref.is_number_integer()) {
    int v = ref.get<int>();
    if (v < 0 || v >= g.n()) throw Error(Err::IndexOutOfRange, "node reference out of range");
    return v;
  }
  auto v = g.node_by_label(ref.get<std::string>());
  if (!v) throw Error(Err::ParseError, "unknown node label: " + ref.get<std::string>());
  return *v;
}
}  // namespace

SeedSpec seedspec_from_json(const std::string& text, const MixedGraph& g) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(Err::ParseError, std::string("seed JSON: ") + e.what());
  }
  SeedSpec spec;
  for (const auto& t : j.value("iv", json::array()))
    spec.iv_triples.push_back({resolve_node(g, t.at(0)), resolve_node(g, t.at(1)),
                               resolve_node(g, t.at(2))});
  for (const auto& v : j.value("intervened", json::array()))
    spec.intervened.push_back(resolve_node(g, v));
  spec.use_ng_rule = j.value("ng_rule", false);
  for (const auto& p : j.value("prior", json::array())) {
    SeedSpec::Prior pr;
    pr.edge = {resolve_node(g, p.at("edge").at(0)), resolve_node(g, p.at("edge").at(1))};
    if (p.contains("value")) pr.value = p.at("value").get<double>();
    spec.prior_edges.push_back(pr);
  }
  return spec;
}

std::string seedspec_to_json(const SeedSpec& spec, const MixedGraph& g) {
  json j;
  auto iv = json::array();
  for (const auto& t : spec.iv_triples) iv.push_back({g.label(t.z), g.label(t.t), g.label(t.y)});
  j["iv"] = iv;
  auto in = json::array();
  for (NodeId v : spec.intervened) in.push_back(g.label(v));
  j["intervened"] = in;
  j["ng_rule"] = spec.use_ng_rule;
  auto pr = json::array();
  for (const auto& p : spec.prior_edges) {
    json e;
    e["edge"] = {g.label(p.edge.first), g.label(p.edge.second)};
    if (p.value) e["value"] = *p.value;
    pr.push_back(e);
  }
  j["prior"] = pr;
  return j.dump(2);
}

std::string witness_to_json(const MixedGraph& g, const Witness& w) {
  json j;
  j["node"] = g.label(w.node);
  auto src = json::array();
  for (NodeId s : w.sources) src.push_back(g.label(s));
  j["sources"] = src;
  auto kp = json::array();
  for (NodeId k : w.known_parents) kp.push_back(g.label(k));
  j["known_parents"] = kp;
  auto sys = json::array();
  for (const auto& [tgt, t] : w.system) {
    json tr;
    tr["target"] = g.label(tgt);
    tr["source"] = g.label(t.source);
    tr["kind"] = t.kind == HalfTrek::Kind::DirectedPath ? "directed" : "confounded";
    auto path = json::array();
    for (NodeId v : t.path_nodes) path.push_back(g.label(v));
    tr["path"] = path;
    sys.push_back(tr);
  }
  j["system"] = sys;
  return j.dump(2);
}

void write_result_csv(std::ostream& os, const MixedGraph& g, const ClosureResult& res,
                      uint64_t rng_seed, const std::string& config) {
  uint64_t h = 1469598103934665603ULL;
  for (char c : config) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  os << "# iic v0.1.0 rng_seed=" << rng_seed << " config_hash=" << std::hex << h << std::dec
     << "\n";
  os << "edge,status,rule,iteration,witness_sources\n";
  for (const auto& [e, st] : res.status) {
    os << g.label(e.first) << "->" << g.label(e.second) << "," << to_string(st);
    auto it = res.provenance.find(e);
    if (it != res.provenance.end()) {
      os << "," << to_string(it->second.rule) << "," << it->second.iteration << ",";
      if (it->second.witness) {
        const auto& src = it->second.witness->sources;
        for (size_t k = 0; k < src.size(); ++k) os << (k ? "|" : "") << g.label(src[k]);
      }
    } else {
      os << ",,,";
    }
    os << "\n";
  }
}

Dataset dataset_from_csv(std::istream& is, const MixedGraph& g) {
  std::string line;
  if (!std::getline(is, line)) throw Error(Err::ParseError, "empty data CSV");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
  }
  int regime_col = -1;
  std::vector<NodeId> node_of_col(cols.size(), -1);
  for (size_t c = 0; c < cols.size(); ++c) {
    if (cols[c] == "__regime") {
      regime_col = static_cast<int>(c);
      continue;
    }
    auto v = g.node_by_label(cols[c]);
    if (!v) throw Error(Err::ParseError, "data column does not match a node: " + cols[c]);
    node_of_col[c] = *v;
  }
  std::vector<std::vector<double>> rows;
  std::vector<int> regimes;
  std::map<std::string, int> regime_ids;
  Dataset out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> row(g.n(), 0.0);
    int regime = -1;
    for (size_t c = 0; c < cols.size(); ++c) {
      if (!std::getline(ss, tok, ',')) throw Error(Err::ParseError, "short data row");
      if (static_cast<int>(c) == regime_col) {
        if (!tok.empty()) {
          auto [it, fresh] = regime_ids.try_emplace(tok, static_cast<int>(out.regime_nodes.size()));
          if (fresh) {
            std::set<NodeId> nodes;
            std::stringstream rs(tok);
            std::string part;
            while (std::getline(rs, part, '+')) {
              auto v = g.node_by_label(part);
              if (!v) throw Error(Err::ParseError, "unknown regime node: " + part);
              nodes.insert(*v);
            }
            out.regime_nodes.push_back(nodes);
          }
          regime = it->second;
        }
      } else {
        row[node_of_col[c]] = std::stod(tok);
      }
    }
    rows.push_back(std::move(row));
    regimes.push_back(regime);
  }
  out.X.resize(rows.size(), g.n());
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < g.n(); ++c) out.X(r, c) = rows[r][c];
  out.regime = std::move(regimes);
  return out;
}

void dataset_to_csv(std::ostream& os, const MixedGraph& g, const Dataset& d) {
  for (int c = 0; c < g.n(); ++c) os << g.label(c) << ",";
  os << "__regime\n";
  for (int r = 0; r < d.X.rows(); ++r) {
    for (int c = 0; c < g.n(); ++c) os << d.X(r, c) << ",";
    if (r < static_cast<int>(d.regime.size()) && d.regime[r] >= 0) {
      const auto& nodes = d.regime_nodes[d.regime[r]];
      bool first = true;
      for (NodeId v : nodes) {
        os << (first ? "" : "+") << g.label(v);
        first = false;
      }
    }
    os << "\n";
  }
}

std::string read_stream_or_file(const std::string& path_or_dash) {
  if (path_or_dash == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path_or_dash);
  if (!f) throw Error(Err::ParseError, "cannot open file: " + path_or_dash);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace iic
