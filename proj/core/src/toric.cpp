#include "kenv/toric.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace kenv {

void Fan::validate() const {
  if (rank <= 0) throw std::invalid_argument("fan rank must be positive");
  if (rays.empty()) throw std::invalid_argument("fan has no rays");
  for (size_t r = 0; r < rays.size(); ++r) {
    if (static_cast<int>(rays[r].size()) != rank)
      throw std::invalid_argument("ray " + std::to_string(r + 1) + " has wrong dimension");
    Int g = 0;
    for (const auto& c : rays[r]) g = gcd(g, c);
    if (g == 0) throw std::invalid_argument("ray " + std::to_string(r + 1) + " is zero");
    if (g != 1)
      throw std::invalid_argument("ray " + std::to_string(r + 1) +
                                  " is not primitive (gcd = " + to_string(g) + ")");
  }
  std::vector<bool> covered(rays.size(), false);
  for (size_t c = 0; c < max_cones.size(); ++c) {
    for (int i : max_cones[c]) {
      if (i < 0 || i >= static_cast<int>(rays.size()))
        throw std::invalid_argument("cone " + std::to_string(c + 1) + " has a bad ray index");
      covered[i] = true;
    }
    auto sorted = max_cones[c];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("cone " + std::to_string(c + 1) + " repeats a ray");
  }
  for (size_t a = 0; a < max_cones.size(); ++a)
    for (size_t b = 0; b < max_cones.size(); ++b) {
      if (a == b) continue;
      if (std::includes(max_cones[b].begin(), max_cones[b].end(), max_cones[a].begin(),
                        max_cones[a].end()))
        throw std::invalid_argument("maximal cone " + std::to_string(a + 1) +
                                    " is contained in cone " + std::to_string(b + 1));
    }
  for (size_t r = 0; r < rays.size(); ++r)
    if (!covered[r])
      throw std::invalid_argument("ray " + std::to_string(r + 1) + " lies in no maximal cone");

  // rays must span the lattice rationally (necessary for completeness)
  QMat mat;
  for (const auto& ray : rays) {
    QVec row;
    for (const auto& c : ray) row.push_back(Scalar(c));
    mat.push_back(std::move(row));
  }
  if (rank_of(mat) != rank)
    throw std::invalid_argument("rays do not span the lattice: the fan cannot be complete");
}

FanGrading grading_from_fan(const Fan& fan) {
  fan.validate();
  int nrays = static_cast<int>(fan.rays.size());
  IMat relations;
  for (int i = 0; i < fan.rank; ++i) {
    IVec rel(nrays);
    for (int r = 0; r < nrays; ++r) rel[r] = fan.rays[r][i];
    relations.push_back(std::move(rel));
  }
  FanGrading out;
  out.group = AbelianGroup::cokernel(nrays, relations);
  for (int r = 0; r < nrays; ++r) {
    IVec unit(nrays, 0);
    unit[r] = 1;
    out.ray_degrees.push_back(out.group->project(unit));
  }
  return out;
}

std::vector<std::vector<int>> irrelevant_components(const Fan& fan) {
  int nrays = static_cast<int>(fan.rays.size());
  std::vector<std::vector<int>> cones;
  for (auto c : fan.max_cones) {
    std::sort(c.begin(), c.end());
    cones.push_back(std::move(c));
  }
  auto inside_some_cone = [&](const std::vector<int>& s) {
    for (const auto& c : cones)
      if (std::includes(c.begin(), c.end(), s.begin(), s.end())) return true;
    return false;
  };
  std::vector<std::vector<int>> minimal;
  auto contains_found = [&](const std::vector<int>& s) {
    for (const auto& f : minimal)
      if (std::includes(s.begin(), s.end(), f.begin(), f.end())) return true;
    return false;
  };
  // breadth-first over subset size; a found set prunes all supersets
  for (int size = 2; size <= nrays; ++size) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int from) {
      if (static_cast<int>(cur.size()) == size) {
        if (!contains_found(cur) && !inside_some_cone(cur)) minimal.push_back(cur);
        return;
      }
      for (int i = from; i < nrays; ++i) {
        cur.push_back(i);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
  return minimal;
}

CyResult cy_check(const std::vector<Degree>& alphas, const std::vector<Degree>& betas) {
  if (alphas.empty()) throw std::invalid_argument("cy_check needs variable degrees");
  Degree suma = alphas[0].group()->zero();
  for (const auto& a : alphas) suma = suma + a;
  Degree sumb = suma.group()->zero();
  for (const auto& b : betas) sumb = sumb + b;
  CyResult out;
  out.holds = (suma == sumb);
  if (!out.holds) out.witness = suma - sumb;
  return out;
}

std::string to_string(OriginSupport v) {
  switch (v) {
    case OriginSupport::HoldsInWindow: return "holds-in-window";
    case OriginSupport::Fails: return "fails";
    case OriginSupport::Unknown: return "unknown";
  }
  return "?";
}

namespace {

// Dimension counts of k[stratum vars]/(restricted W_j) by total degree.
StratumReport probe_stratum(const Fan& fan, const Potential& pot, const std::vector<int>& gamma,
                            int cap) {
  StratumReport rep;
  rep.gamma = gamma;
  int nrays = static_cast<int>(fan.rays.size());
  std::vector<bool> killed(nrays, false);
  for (int g : gamma) killed[g] = true;
  std::vector<int> vars;
  for (int r = 0; r < nrays; ++r)
    if (!killed[r]) vars.push_back(r);

  if (vars.empty()) {
    rep.verdict = OriginSupport::HoldsInWindow;
    rep.note = "stratum is the origin";
    return rep;
  }

  // restrict the equations to the stratum
  std::vector<Polynomial> restricted;
  for (int j = 0; j < pot.m(); ++j) {
    Polynomial r = pot.equation(j).filter([&](const Monomial& mo) {
      for (int g : gamma)
        if (mo.exp(Block::X, g) > 0) return false;
      return true;
    });
    if (!r.is_zero()) restricted.push_back(std::move(r));
  }
  if (static_cast<int>(restricted.size()) < static_cast<int>(vars.size())) {
    rep.verdict = OriginSupport::Fails;
    rep.note = "only " + std::to_string(restricted.size()) + " equations survive on a " +
               std::to_string(vars.size()) + "-dimensional stratum";
    return rep;
  }

  // windowed dimension counts by total degree in the stratum variables
  std::vector<Monomial> monos;
  {
    Monomial cur(pot.layout());
    std::function<void(size_t, int)> rec = [&](size_t at, int left) {
      if (at == vars.size()) {
        monos.push_back(cur);
        return;
      }
      for (int e = 0; e <= left; ++e) {
        cur.set_exp(Block::X, vars[at], e);
        rec(at + 1, left - e);
      }
      cur.set_exp(Block::X, vars[at], 0);
    };
    rec(0, cap);
  }
  std::map<int, std::vector<Monomial>> by_degree;
  for (const auto& mo : monos) by_degree[mo.total_degree()].push_back(mo);

  std::vector<int> dims(cap + 1, 0);
  for (int d = 0; d <= cap; ++d) {
    const auto& basis = by_degree[d];
    std::map<Monomial, int> idx;
    for (size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i], i);
    RowSpan ideal(basis.size());
    for (const auto& w : restricted) {
      // multiples q*w meeting total degree d
      for (const auto& [qd, qmonos] : by_degree) {
        for (const auto& q : qmonos) {
          Polynomial img = w * Polynomial::monomial(q, Scalar(1));
          Polynomial part = img.filter([&](const Monomial& mo) { return mo.total_degree() == d; });
          if (part.is_zero()) continue;
          bool within = true;
          QVec row(basis.size(), Scalar(0));
          for (const auto& [mo, c] : part.terms()) {
            auto it = idx.find(mo);
            if (it == idx.end()) {
              within = false;
              break;
            }
            row[it->second] = c;
          }
          if (within) ideal.add(std::move(row));
        }
      }
    }
    dims[d] = static_cast<int>(basis.size() - ideal.dim());
  }

  bool upper_band_zero = true;
  for (int d = cap / 2 + 1; d <= cap; ++d)
    if (dims[d] != 0) upper_band_zero = false;
  rep.verdict = upper_band_zero ? OriginSupport::HoldsInWindow : OriginSupport::Unknown;
  std::string dim_list;
  for (int d = 0; d <= cap; ++d) dim_list += (d ? "," : "") + std::to_string(dims[d]);
  rep.note = "quotient dims by total degree 0.." + std::to_string(cap) + ": " + dim_list;
  return rep;
}

}  // namespace

ThickReport thick_subcategory_generators(const Fan& fan, const Potential* pot, ThickMode mode,
                                         int probe_degree_cap) {
  ThickReport out;
  if (mode == ThickMode::Singularities) {
    out.generators.push_back({{}, "k with all A-shifts"});
  } else {
    for (const auto& gamma : irrelevant_components(fan)) {
      std::string vars;
      for (size_t i = 0; i < gamma.size(); ++i)
        vars += (i ? "," : "") + std::string("e") + std::to_string(gamma[i] + 1);
      std::string desc = "Lambda(V/V_Gamma) on {" + vars + "} (rank " +
                         std::to_string(1u << gamma.size()) +
                         "); G-image: Koszul complex (Lambda(L_Gamma) (x) S_W, d_Kos) on {";
      for (size_t i = 0; i < gamma.size(); ++i)
        desc += (i ? "," : "") + std::string("x") + std::to_string(gamma[i] + 1);
      desc += "}";
      out.generators.push_back({gamma, desc});
    }
  }
  if (pot != nullptr) {
    for (const auto& gamma : irrelevant_components(fan)) {
      out.origin_support.push_back(probe_stratum(fan, *pot, gamma, probe_degree_cap));
    }
  }
  return out;
}

}  // namespace kenv
