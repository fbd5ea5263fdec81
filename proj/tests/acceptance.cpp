// Acceptance suite: one line per criterion, exit status 0 only if all pass.
// Everything is exact rational arithmetic; the only randomness is a fixed seed.

#include "bldgraph/checkers.hpp"
#include "bldgraph/convergence.hpp"
#include "bldgraph/fixtures.hpp"
#include "bldgraph/lifting.hpp"
#include "bldgraph/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace bldgraph;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (problems.size() < 5) problems.push_back(what);
  }
};

struct Named {
  std::string name;
  GraphMap map;
};

const Rational kGrid[] = {Rational(1), Rational(9, 8), Rational(3, 2), Rational(2), Rational(3)};

GraphPoint vtx(const MetricGraph& g, const std::string& name) { return GraphPoint::at_vertex(g.vertex_by_name(name)); }

std::vector<Named> cover_fixtures() {
  return {{"id_I3", identity_map(path_graph(3))},
          {"id_C4", identity_map(cycle_graph(4, 1))},
          {"W2", winding_map(2, 3)},
          {"W3", winding_map(3, 3)},
          {"TENT", tent_map()},
          {"SPEED2", speed2_map()}};
}

std::vector<Named> full_corpus() {
  auto out = cover_fixtures();
  out.push_back({"FOLD", fold_map()});
  out.push_back({"CONST", const_map()});
  return out;
}

std::vector<Named> random_covers(std::mt19937& rng, int count) {
  std::vector<Named> out;
  for (int k = 0; k < count; ++k) out.push_back({"random#" + std::to_string(k), random_branched_cover(rng)});
  return out;
}

GraphPoint random_point(std::mt19937& rng, const MetricGraph& g) {
  if (g.edge_count() == 0 || rng() % 3 == 0)
    return GraphPoint::at_vertex(VertexId{static_cast<std::uint32_t>(rng() % g.vertex_count())});
  const EdgeId e{static_cast<std::uint32_t>(rng() % g.edge_count())};
  return g.point(e, g.edge(e).length * Rational(1 + static_cast<long>(rng() % 7), 8));
}

std::string str(const std::optional<Rational>& r) { return r ? r->str() : "none"; }

// 1. The four minimal constants coincide on branched covers.
Outcome equivalence(const std::vector<Named>& maps) {
  Outcome o;
  for (const auto& [name, f] : maps) {
    o.require(is_branched_cover(f), name + " is not a branched cover");
    const auto bld = min_constant(f, Property::BLD);
    for (const Property p : {Property::LQ, Property::Radial, Property::Coradial}) {
      const auto c = min_constant(f, p);
      o.require(bld && c == bld, name + ": " + std::string(property_name(p)) + " " + str(c) + " vs bld " + str(bld));
    }
  }
  o.detail = std::to_string(maps.size()) + " covers, BLD = LQ = radial = coradial";
  return o;
}

// 2. Openness and discreteness cannot be dropped.
Outcome sharpness() {
  Outcome o;
  const GraphMap fold = fold_map();
  const GraphMap cst = const_map();
  o.require(check_radial(fold, 1).verdict, "FOLD fails radial(1)");
  o.require(!is_open(fold).holds, "FOLD is open");
  o.require(check_lq(cst, 1).verdict, "CONST fails lq(1)");
  o.require(!is_discrete(cst).holds, "CONST is discrete");
  for (const Rational& L : kGrid) {
    o.require(!check_bld(fold, L).verdict, "FOLD passes bld(" + L.str() + ")");
    o.require(!check_bld(cst, L).verdict, "CONST passes bld(" + L.str() + ")");
  }
  o.detail = "FOLD radial(1) and not open, CONST lq(1) and not discrete, both rejected as BLD";
  return o;
}

// 3. Local LQ implies global LQ at the same constant.
Outcome local_to_global(const std::vector<Named>& maps) {
  Outcome o;
  int implications = 0;
  for (const auto& [name, f] : maps)
    for (const Rational& L : kGrid) {
      if (!check_lq_local(f, L).verdict) continue;
      ++implications;
      o.require(check_lq(f, L).verdict, name + ": lq_local(" + L.str() + ") but not lq");
    }
  o.require(implications > 0, "no map passed lq_local");
  o.detail = std::to_string(implications) + " (map, L) pairs pass lq_local, all pass lq";
  return o;
}

// 4. Radial and pointwise radial verdicts agree.
Outcome radial_pointwise(const std::vector<Named>& maps) {
  Outcome o;
  int pairs = 0;
  for (const auto& [name, f] : maps)
    for (const Rational& L : kGrid) {
      ++pairs;
      o.require(check_radial(f, L).verdict == check_radial_pointwise(f, L).verdict,
                name + ": radial and pointwise disagree at " + L.str());
    }
  o.detail = std::to_string(pairs) + " (map, L) pairs agree";
  return o;
}

// 5. Radial maps distort walk lengths by at most L either way.
Outcome walk_bounds(const std::vector<Named>& maps, std::mt19937& rng) {
  Outcome o;
  int walks = 0;
  for (const auto& [name, f] : maps) {
    const auto L = min_constant(f, Property::Radial);
    if (!L || !check_radial(f, *L).verdict) continue;
    for (int k = 0; k < 100; ++k) {
      const Walk w = random_walk(rng, f.source(), random_point(rng, f.source()), 1 + static_cast<int>(rng() % 6));
      const Rational lw = walk_length(f.source(), w);
      const Rational lf = walk_length(f.target(), image_walk(f, w));
      ++walks;
      o.require(lw / *L <= lf && lf <= *L * lw, name + ": walk length bound violated");
    }
  }
  o.detail = std::to_string(walks) + " walks within [l/L, L*l]";
  return o;
}

// 6. Lifting through branched covers.
Outcome lifting(const std::vector<Named>& maps, std::mt19937& rng) {
  Outcome o;
  int lifts = 0;
  for (const auto& [name, f] : maps) {
    const Rational L = *min_constant(f, Property::BLD);
    for (int k = 0; k < 100; ++k) {
      const GraphPoint x0 = random_point(rng, f.source());
      const Walk beta = random_walk(rng, f.target(), f.eval(x0), 1 + static_cast<int>(rng() % 6));
      const Lift lift = total_lift(f, beta, x0);
      ++lifts;
      o.require(lift.total, name + ": lift is not total");
      o.require(verify_lift(f, lift.path, beta), name + ": verify_lift failed");
      const Rational la = walk_length(f.source(), lift.path);
      const Rational lb = walk_length(f.target(), beta);
      o.require(lb / L <= la && la <= L * lb, name + ": lift length outside the BLD bounds");
    }
  }
  for (int k = 2; k <= 4; ++k) {
    const GraphMap w = winding_map(k, 3);
    const MetricGraph& y = w.target();
    const GraphPoint v0 = vtx(y, "v0");
    Walk loop{v0, {}};
    for (const char* e : {"e1", "e2", "e3"}) {
      const EdgeId id = y.edge_by_name(e);
      loop.segments.push_back({id, 0, y.edge(id).length});
    }
    const LiftSet all = all_maximal_lifts(w, loop);
    std::vector<Walk> distinct;
    for (const auto& l : all.lifts) {
      o.require(l.total && verify_lift(w, l.path, loop), "W" + std::to_string(k) + ": bad loop lift");
      bool seen = false;
      for (const auto& d : distinct) seen = seen || d == l.path;
      if (!seen) distinct.push_back(l.path);
    }
    o.require(!all.truncated && distinct.size() == static_cast<std::size_t>(k),
              "W" + std::to_string(k) + ": " + std::to_string(distinct.size()) + " loop lifts");
  }
  o.detail = std::to_string(lifts) + " total lifts verified, W_k loops lift k ways (k = 2, 3, 4)";
  return o;
}

// 7. Fiber transport is a bijection with distances at most L d(x, y).
Outcome transport(std::mt19937& rng) {
  Outcome o;
  int pairs = 0;
  for (const GraphMap& f : {winding_map(2, 3), winding_map(3, 3), tent_map()}) {
    const Rational L = *min_constant(f, Property::BLD);
    std::vector<GraphPoint> branch_images;
    for (const auto& b : branch_set(f)) branch_images.push_back(f.eval(b));
    auto avoids = [&](const GraphPoint& p) {
      for (const auto& q : branch_images)
        if (p == q) return false;
      return true;
    };
    int done = 0;
    while (done < 20) {
      const GraphPoint x = random_point(rng, f.target());
      const GraphPoint y = random_point(rng, f.target());
      if (x == y || !avoids(x) || !avoids(y)) continue;
      const FiberTransport t = fiber_transport(f, x, y, L);
      o.require(t.bijective, "transport is not bijective");
      o.require(t.within_bound, "transport distance exceeds L d(x, y)");
      ++done;
      ++pairs;
    }
  }
  o.detail = std::to_string(pairs) + " point pairs on W2, W3, TENT";
  return o;
}

// 8. The winding sequence converges to the constant map.
Outcome convergence() {
  Outcome o;
  const ConvergenceCertificate cert = winding_demo(10, 4);
  const ConvergenceReport rep = check_package_convergence(cert);
  o.require(rep.converges, "winding_demo(10, 4) does not verify");
  for (const auto& m : cert.maps)
    o.require(m.epsilon <= Rational(1, static_cast<long>(m.index)), "eps_" + std::to_string(m.index) + " > 1/i");
  for (std::size_t i = 0; i < cert.packages.size(); ++i)
    o.require(check_bld(cert.packages[i].map, 1).verdict, "f_" + std::to_string(i + 1) + " is not 1-BLD");
  o.require(check_lq(cert.limit.map, 1).verdict, "limit fails lq(1)");
  o.require(!is_discrete(cert.limit.map).holds, "limit is discrete");
  const LimitReport bld = bld_limit_harness(cert, 1);
  o.require(!bld.applicable && bld.note.find("discrete") != std::string::npos,
            "bld harness does not flag discreteness");

  const GraphMap w2 = winding_map(2, 3);
  const ConvergenceCertificate still = constant_sequence(make_package(w2, vtx(w2.source(), "v0")), 6);
  const LimitReport lim = bld_limit_harness(still, 1);
  o.require(lim.hypotheses_hold && lim.applicable && lim.limit_passes, "constant W2 sequence: limit is not 1-BLD");
  o.detail = "10 packages, worst i*eps_i/rate " + rep.worst_epsilon_ratio.str() + ", constant W2 limit is 1-BLD";
  return o;
}

// 9. The brute-force oracle reproduces the exact verdicts of 1-5.
Outcome oracle(const std::vector<Named>& corpus) {
  Outcome o;
  int compared = 0;
  for (const auto& [name, f] : corpus) {
    const DyadicOracle d(f, 64);
    auto same = [&](bool a, bool b, const std::string& what) {
      ++compared;
      o.require(a == b, name + ": " + what);
    };
    same(d.open(), is_open(f).holds, "open");
    same(d.discrete(), is_discrete(f).holds, "discrete");
    if (is_branched_cover(f))
      for (const Property p : {Property::BLD, Property::LQ, Property::Radial, Property::Coradial}) {
        ++compared;
        o.require(d.constant(p) == min_constant(f, p), name + ": minimal " + std::string(property_name(p)));
      }
    for (const Rational& L : kGrid) {
      for (const Property p : {Property::BLD, Property::LQ, Property::Radial, Property::RadialPointwise})
        same(d.check(p, L), check(f, p, L).verdict, std::string(property_name(p)) + " at " + L.str());
      same(d.check_lq_local(L), check_lq_local(f, L).verdict, "lq_local at " + L.str());
    }
  }
  o.detail = std::to_string(compared) + " verdicts on " + std::to_string(corpus.size()) + " maps, grid 1/64";
  return o;
}

// 10. Normal neighbourhoods and domains.
Outcome normal_domains(std::mt19937& rng) {
  Outcome o;
  const GraphMap id = identity_map(cycle_graph(3, 1));
  const GraphMap w2 = winding_map(2, 3);
  const GraphMap tent = tent_map();
  o.require(max_normal_radius(id, vtx(id.source(), "v0")) == Rational(3, 2), "identity on C3: r != 3/2");
  o.require(max_normal_radius(w2, vtx(w2.source(), "v0")) == Rational(3, 2), "W2: r != 3/2");
  o.require(max_normal_radius(tent, vtx(tent.source(), "v1")) == 1, "TENT: r != 1");

  auto decomposes = [&](const GraphMap& f, const GraphPoint& y, std::size_t parts, const std::string& name) {
    const auto d = normal_decomposition(f, Region::whole(f.source()), y);
    o.require(d.parts.size() == parts && d.disjoint && d.union_matches && d.all_normal, name + ": decomposition");
  };
  decomposes(w2, vtx(w2.target(), "v0"), 2, "W2");
  decomposes(identity_map(path_graph(2)), GraphPoint::at_vertex(VertexId{1}), 1, "identity");
  decomposes(tent, tent.target().point(tent.target().edge_by_name("e1"), Rational(1, 2)), 2, "TENT");

  int triples = 0, attempts = 0;
  while (triples < 50 && attempts < 1000) {
    ++attempts;
    const GraphMap f = random_branched_cover(rng);
    const GraphPoint x = random_point(rng, f.source());
    const Rational r0 = max_normal_radius(f, x);
    const Rational r = r0 * Rational(1 + static_cast<long>(rng() % 7), 8);
    const Region u = u_component(f, x, r);
    if (!is_normal_neighbourhood(f, u, x)) {
      o.require(false, "U(x, f, r) with r < r_x is not a normal neighbourhood");
      continue;
    }
    const Region w = ball(f.target(), f.eval(x), r * Rational(1 + static_cast<long>(rng() % 8), 8));
    if (!w.is_subset_of(image_region(f, u))) continue;
    ++triples;
    o.require(connected_preimage_check(f, x, u, w), "disconnected preimage in a normal neighbourhood");
  }
  o.require(triples == 50, "only " + std::to_string(triples) + " valid triples generated");
  o.detail = "r_x = 3/2, 3/2, 1; exact decompositions; " + std::to_string(triples) + " random triples connected";
  return o;
}

}  // namespace

int main() {
  std::mt19937 rng(20240611);
  const auto start = std::chrono::steady_clock::now();

  auto covers = cover_fixtures();
  for (auto& m : random_covers(rng, 50)) covers.push_back(std::move(m));
  std::vector<Named> everything = covers;
  everything.push_back({"FOLD", fold_map()});
  everything.push_back({"CONST", const_map()});

  const std::vector<std::function<Outcome()>> criteria = {
      [&] { return equivalence(covers); },
      [&] { return sharpness(); },
      [&] { return local_to_global(everything); },
      [&] { return radial_pointwise(everything); },
      [&] { return walk_bounds(everything, rng); },
      [&] { return lifting(cover_fixtures(), rng); },
      [&] { return transport(rng); },
      [&] { return convergence(); },
      [&] { return oracle(full_corpus()); },
      [&] { return normal_domains(rng); },
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    std::ostringstream line;
    line << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail;
    for (const auto& p : o.problems) line << "\n    " << p;
    std::puts(line.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of %zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failed, criteria.size(),
              secs);
  return failed == 0 ? 0 : 1;
}
