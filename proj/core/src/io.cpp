#include "kenv/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "kenv/parse.hpp"

namespace kenv {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return j;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument(path + ": " + msg);
}

}  // namespace

Degree degree_from_literal(const std::string& text, const AbelianGroup& group) {
  std::vector<Int> free_part, torsion_part;
  parse_degree_literal(text, free_part, torsion_part);
  if (static_cast<int>(free_part.size()) != group.free_rank() ||
      torsion_part.size() > group.torsion().size())
    throw std::invalid_argument("degree literal '" + text + "' does not match the group " +
                                group.str());
  torsion_part.resize(group.torsion().size(), Int(0));
  return group.degree(std::move(free_part), std::move(torsion_part));
}

std::shared_ptr<Potential> load_potential(const std::string& path) {
  json j = load_json(path);
  if (!j.contains("n") || !j.contains("m") || !j.contains("W")) fail(path, "need keys n, m, W");
  int n = j["n"].get<int>();
  int m = j["m"].get<int>();
  VarLayout lay{n, m};
  std::vector<Polynomial> ws;
  if (!j["W"].is_array() || static_cast<int>(j["W"].size()) != m)
    fail(path, "W must list exactly m polynomials");
  for (const auto& w : j["W"]) ws.push_back(parse_polynomial(w.get<std::string>(), lay));

  std::optional<GradingScheme> grading;
  if (j.contains("grading")) {
    const json& g = j["grading"];
    int r = g.value("free_rank", 0);
    IVec torsion;
    for (const auto& t : g.value("torsion", json::array())) torsion.push_back(Int(t.get<long>()));
    // present ZZ^r x prod ZZ/d_i as a cokernel
    int ambient = r + static_cast<int>(torsion.size());
    IMat rels;
    for (size_t i = 0; i < torsion.size(); ++i) {
      IVec rel(ambient, 0);
      rel[r + i] = torsion[i];
      rels.push_back(std::move(rel));
    }
    GroupPtr group = AbelianGroup::cokernel(ambient, rels);
    GradingScheme gs;
    gs.group = group;
    auto read_degs = [&](const char* key, int count, std::vector<Degree>& out) {
      if (!g.contains(key) || static_cast<int>(g[key].size()) != count)
        fail(path, std::string("grading.") + key + " must list " + std::to_string(count) +
                       " degree literals");
      for (const auto& d : g[key]) out.push_back(degree_from_literal(d.get<std::string>(), *group));
    };
    read_degs("alpha", n, gs.alpha);
    read_degs("beta", m, gs.beta);
    grading = std::move(gs);
  }
  return std::make_shared<Potential>(n, m, std::move(ws), std::move(grading));
}

Fan load_fan(const std::string& path) {
  json j = load_json(path);
  if (!j.contains("rank") || !j.contains("rays") || !j.contains("max_cones"))
    fail(path, "need keys rank, rays, max_cones");
  Fan fan;
  fan.rank = j["rank"].get<int>();
  for (const auto& ray : j["rays"]) {
    IVec r;
    for (const auto& c : ray) r.push_back(Int(c.get<long>()));
    fan.rays.push_back(std::move(r));
  }
  for (const auto& cone : j["max_cones"]) {
    std::vector<int> c;
    for (const auto& i : cone) c.push_back(i.get<int>() - 1);  // files are 1-based
    std::sort(c.begin(), c.end());
    fan.max_cones.push_back(std::move(c));
  }
  try {
    fan.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return fan;
}

ModulePresentation load_module(const std::string& path, const Potential& pot) {
  json j = load_json(path);
  if (!j.contains("generators")) fail(path, "need key generators");
  ModulePresentation pres;
  for (const auto& g : j["generators"]) {
    if (!g.is_array() || g.size() != 3) fail(path, "generator entries are [name, degree, hdeg]");
    ModuleGenerator gen;
    gen.name = g[0].get<std::string>();
    gen.degree = degree_from_literal(g[1].get<std::string>(), *pot.group());
    gen.hdeg = g[2].get<int>();
    pres.generators.push_back(std::move(gen));
  }
  for (const auto& row : j.value("relations", json::array())) {
    std::vector<Polynomial> r;
    if (row.size() != pres.generators.size())
      fail(path, "relation rows must have one entry per generator");
    for (const auto& p : row) {
      std::string text = p.get<std::string>();
      r.push_back(text == "0" ? Polynomial(pot.layout()) : parse_polynomial(text, pot.layout()));
    }
    pres.relations.push_back(std::move(r));
  }
  return pres;
}

Window load_window(const std::string& path, const Potential& pot) {
  json j = load_json(path);
  Window win;
  win.h_min = j.value("h_min", 0);
  win.h_max = j.value("h_max", 0);
  for (const auto& d : j.value("degrees", json::array()))
    win.degrees.push_back(degree_from_literal(d.get<std::string>(), *pot.group()));
  if (win.degrees.empty()) fail(path, "window needs at least one degree");
  return win;
}

}  // namespace kenv
