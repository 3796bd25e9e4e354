#include "fnfm/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "fnfm/stallings.hpp"

namespace fnfm {

namespace {

constexpr long long kOrbitWordCap = 1 << 20;
constexpr long long kProbeWordCap = 1 << 15;

long long common_prefix(const FreeWord& a, const FreeWord& b) {
  const auto& x = a.letters();
  const auto& y = b.letters();
  std::size_t n = std::min(x.size(), y.size());
  std::size_t i = 0;
  while (i < n && x[i] == y[i]) ++i;
  return static_cast<long long>(i);
}

FreeWord word_prefix(const FreeWord& w, long long k) {
  if (k >= w.length()) return w;
  if (k <= 0) return FreeWord(w.alphabet());
  std::vector<int> head(w.letters().begin(), w.letters().begin() + k);
  return FreeWord(w.alphabet(), std::move(head));
}

/// Whether no product h(α)h(β) of signed generator images, β != α^-1,
/// cancels at the junction.  Images of reduced words then concatenate as
/// blocks, so a one-step image prefix is exact with no cancellation
/// reserve at all.
bool junction_cancel_free(const FreeHom& h) {
  std::vector<FreeWord> im;
  im.reserve(2 * h.images.size());
  for (const FreeWord& w : h.images) {
    im.push_back(w);
    im.push_back(w.inverse());
  }
  for (std::size_t p = 0; p < im.size(); ++p) {
    if (im[p].empty()) return false;
    for (std::size_t q = 0; q < im.size(); ++q) {
      if ((p ^ 1) == q) continue;
      if ((im[p] * im[q]).length() != im[p].length() + im[q].length())
        return false;
    }
  }
  return true;
}

/// The free-group map feeding one output component of the boundary
/// action, with its cancellation bookkeeping.
struct CompMap {
  const FreeHom* h = nullptr;
  bool from_x = true;
  bool trivial = true;
  bool no_cancel = false;
  std::optional<SubgroupGraph> image;

  CompMap(const FreeHom& hom, bool fx) : h(&hom), from_x(fx) {
    trivial = hom.is_trivial();
    if (trivial) return;
    no_cancel = junction_cancel_free(hom);
    if (!no_cancel) image = SubgroupGraph::fold(hom.codomain, hom.images);
  }
};

struct Action {
  CompMap first, second;
};

/// Source factor and component map behind each output component.  Only
/// the three extendable shapes route here; for them the image of (x, y)
/// is (h1(src1), h2(src2)) with the sources read off the classification.
std::pair<const FreeHom*, const FreeHom*> driving_maps(const ProductEndo& e) {
  switch (e.type()) {
    case EndoType::IV:
      if (e.swapped()) return {&e.a_first(), &e.a_second()};
      return {&e.b_first(), &e.b_second()};
    case EndoType::VI:
      return {&e.a_first(), &e.b_second()};
    case EndoType::VII:
      return {&e.b_first(), &e.a_second()};
    default:
      return {nullptr, nullptr};
  }
}

Action extract_action(const ProductEndo& e) {
  bool first_from_x = e.type() == EndoType::VI ||
                      (e.type() == EndoType::IV && e.swapped());
  bool second_from_x = e.type() == EndoType::VII ||
                       (e.type() == EndoType::IV && e.swapped());
  auto [f1, f2] = driving_maps(e);
  if (!f1) throw NotUniformlyContinuous();
  return {CompMap(*f1, first_from_x), CompMap(*f2, second_from_x)};
}

/// One component of a truncated point: `w` is the image prefix, exact
/// when the component is pinned to a finite word.
struct Ball {
  FreeWord w;
  bool exact = false;
};

struct BallPair {
  Ball x, y;
};

BallPair split_point(const TruncatedPoint& p) {
  return {{p.x_prefix, p.x_prefix.length() < p.depth},
          {p.y_prefix, p.y_prefix.length() < p.depth}};
}

/// Image ball of one component.  For an open input prefix w the images
/// of all completions share h(w) minus a cancellation reserve: any
/// cancelled prefix of h(w)^-1 is also a prefix of an element of the
/// image subgroup, so the folded image graph bounds it from above.  A
/// junction-cancellation-free map needs no reserve at all.
Ball step_comp(const CompMap& m, const Ball& in) {
  if (m.trivial) return {FreeWord(m.h->codomain), true};
  if (in.exact) return {(*m.h)(in.w), true};
  if (in.w.empty()) return {FreeWord(m.h->codomain), false};
  FreeWord u = (*m.h)(in.w);
  long long reserve = 0;
  if (!m.no_cancel && !u.empty()) reserve = m.image->trace_prefix(u.inverse());
  long long keep = u.length() - reserve;
  if (keep <= 0) return {FreeWord(m.h->codomain), false};
  return {word_prefix(u, keep), false};
}

BallPair step_point(const Action& act, const BallPair& in) {
  return {step_comp(act.first, act.first.from_x ? in.x : in.y),
          step_comp(act.second, act.second.from_x ? in.x : in.y)};
}

TruncatedPoint pack_point(const BallPair& b, long long exact_floor,
                          long long cap) {
  long long d;
  if (b.x.exact && b.y.exact) {
    d = std::max({exact_floor, b.x.w.length() + 1, b.y.w.length() + 1});
  } else {
    d = std::numeric_limits<long long>::max();
    if (!b.x.exact) d = std::min(d, b.x.w.length());
    if (!b.y.exact) d = std::min(d, b.y.w.length());
  }
  if (cap > 0) d = std::min(d, cap);
  return {word_prefix(b.x.w, d), word_prefix(b.y.w, d), d};
}

void validate_point(const ProductEndo& e, const TruncatedPoint& p) {
  if (p.depth < 1) throw Error("truncation depth must be positive");
  if (p.x_prefix.alphabet() != e.first_alphabet() ||
      p.y_prefix.alphabet() != e.second_alphabet())
    throw Error("truncated point alphabets do not match the endomorphism");
  if (p.x_prefix.length() > p.depth || p.y_prefix.length() > p.depth)
    throw Error("prefix longer than the truncation depth");
}

/// Whether the image ball q and the input ball p can share a point up to
/// the tested depth.  A violation proves some visible letter moves.
bool comp_compatible(const Ball& q, const Ball& p, long long depth) {
  long long c = common_prefix(q.w, p.w);
  if (c >= depth) return true;
  if (q.exact && p.exact) return q.w == p.w;
  if (q.exact) return c == p.w.length();
  if (p.exact) return c == q.w.length();
  return c >= std::min(q.w.length(), p.w.length());
}

/// Whether a concrete orbit point sits within 2^-depth of the ball p
/// describes in this component.
bool within_comp(const FreeWord& cur, const FreeWord& pref, bool exact,
                 long long depth) {
  if (exact && cur == pref) return true;
  return common_prefix(cur, pref) >= depth;
}

TruncatedPoint exact_point(const PairElement& g, long long word_cap) {
  long long natural = std::max(g.x.length(), g.y.length()) + 1;
  long long d = std::min(natural, word_cap);
  return {word_prefix(g.x, d), word_prefix(g.y, d), d};
}

/// All reduced words of length <= maxlen whose first letter does not
/// cancel into `last` (0 lifts the constraint).  Deterministic order.
std::vector<FreeWord> perturbation_suffixes(Alphabet a, long long maxlen,
                                            int last) {
  std::vector<FreeWord> out;
  std::vector<std::vector<int>> frontier{{}};
  out.emplace_back(a);
  for (long long len = 1; len <= maxlen; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& v : frontier) {
      for (int g = 1; g <= a.rank; ++g) {
        for (int s : {g, -g}) {
          if (!v.empty() && v.back() == -s) continue;
          if (v.empty() && last != 0 && s == -last) continue;
          std::vector<int> w = v;
          w.push_back(s);
          out.emplace_back(a, w);
          next.push_back(std::move(w));
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

struct ProbeOutcome {
  std::vector<OrbitWitness> witnesses;
  long long total = 0;
  long long converged = 0;
};

/// Runs every perturbation orbit under `map`.  An orbit converges when
/// it sits within 2^-depth of p on two consecutive iterates; orbits
/// whose words outgrow the length cap are abandoned as non-convergent.
ProbeOutcome run_probes(const ProductEndo& map, const TruncatedPoint& p,
                        long long depth, long long keep,
                        const ProbeConfig& cfg, bool under_inverse) {
  BallPair pb = split_point(p);
  FreeWord px = word_prefix(p.x_prefix, keep);
  FreeWord py = word_prefix(p.y_prefix, keep);
  int last_x = px.empty() ? 0 : px.letters().back();
  int last_y = py.empty() ? 0 : py.letters().back();
  auto sx = perturbation_suffixes(map.first_alphabet(), cfg.suffix_len, last_x);
  auto sy = perturbation_suffixes(map.second_alphabet(), cfg.suffix_len, last_y);
  long long word_cap = std::max<long long>(depth + 8, 32);

  ProbeOutcome out;
  for (const FreeWord& fx : sx) {
    for (const FreeWord& fy : sy) {
      PairElement cur{px * fx, py * fy};
      OrbitWitness w;
      w.start = exact_point(cur, word_cap);
      w.under_inverse = under_inverse;
      bool prev_in = false;
      for (long long j = 1; j <= cfg.budget; ++j) {
        cur = map.apply(cur);
        w.orbit.push_back(exact_point(cur, word_cap));
        bool in_ball = within_comp(cur.x, p.x_prefix, pb.x.exact, depth) &&
                       within_comp(cur.y, p.y_prefix, pb.y.exact, depth);
        if (in_ball && prev_in) {
          w.entered_at = j - 1;
          break;
        }
        prev_in = in_ball;
        if (cur.x.length() > kProbeWordCap || cur.y.length() > kProbeWordCap)
          break;
      }
      ++out.total;
      if (w.entered_at >= 0) ++out.converged;
      out.witnesses.push_back(std::move(w));
    }
  }
  return out;
}

void select_witnesses(ProbeOutcome& po, BoundaryClass& out,
                      const ProbeConfig& cfg) {
  std::stable_sort(po.witnesses.begin(), po.witnesses.end(),
                   [](const OrbitWitness& l, const OrbitWitness& r) {
                     bool ln = l.entered_at < 0;
                     bool rn = r.entered_at < 0;
                     if (ln != rn) return ln;
                     return l.entered_at > r.entered_at;
                   });
  long long cap = std::max<long long>(cfg.witness_cap, 0);
  if (static_cast<long long>(po.witnesses.size()) > cap)
    po.witnesses.resize(static_cast<std::size_t>(cap));
  for (OrbitWitness& w : po.witnesses) out.witnesses.push_back(std::move(w));
}

}  // namespace

UCReport uniform_continuity(const ProductEndo& e) {
  auto [f1, f2] = driving_maps(e);
  if (!f1) return {false, UCReason::TypeObstruction, 0};
  auto extends = [](const FreeHom& h) {
    return h.is_trivial() || hom_injective(h);
  };
  if (!extends(*f1)) return {false, UCReason::ComponentObstruction, 1};
  if (!extends(*f2)) return {false, UCReason::ComponentObstruction, 2};
  return {true, UCReason::UCTypeWithUCComponents, 0};
}

std::vector<TruncatedPoint> iterate_truncated(const ProductEndo& e,
                                              const TruncatedPoint& p,
                                              long long steps,
                                              long long depth_cap) {
  validate_point(e, p);
  if (steps < 0) throw Error("step count must be nonnegative");
  if (!uniform_continuity(e).uniformly_continuous) throw NotUniformlyContinuous();
  Action act = extract_action(e);

  std::vector<TruncatedPoint> out;
  out.reserve(static_cast<std::size_t>(std::min<long long>(steps, 1024)));
  TruncatedPoint cur = p;
  for (long long i = 0; i < steps; ++i) {
    BallPair in = split_point(cur);
    BallPair img = step_point(act, in);
    if (img.x.w.length() > kOrbitWordCap || img.y.w.length() > kOrbitWordCap)
      throw ResourceLimit("iterated image words exceed the internal length cap");
    bool in_exact = in.x.exact && in.y.exact;
    cur = pack_point(img, in_exact ? cur.depth : 0, depth_cap);
    out.push_back(cur);
  }
  return out;
}

std::string boundary_verdict_name(BoundaryVerdict v) {
  switch (v) {
    case BoundaryVerdict::SingularAtDepth: return "singular at depth";
    case BoundaryVerdict::RegularAtDepth: return "regular at depth";
    case BoundaryVerdict::AttractorEvidence: return "attractor evidence";
    case BoundaryVerdict::RepellerEvidence: return "repeller evidence";
    case BoundaryVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

BoundaryClass boundary_fixed_classify(
    const ProductEndo& e, const TruncatedPoint& p, long long depth,
    const std::optional<SubgroupBasisInput>& oracle, const ProbeConfig& cfg) {
  validate_point(e, p);
  if (depth < 1) throw Error("tested depth must be positive");
  if (!uniform_continuity(e).uniformly_continuous) throw NotUniformlyContinuous();

  BallPair in = split_point(p);
  if (!in.x.exact && in.x.w.length() < depth)
    throw Error("first component prefix does not reach the tested depth");
  if (!in.y.exact && in.y.w.length() < depth)
    throw Error("second component prefix does not reach the tested depth");

  // Refute fixedness where the image bounds can see a moved letter;
  // beyond their reach the precondition is trusted.
  Action act = extract_action(e);
  BallPair img = step_point(act, in);
  if (!comp_compatible(img.x, in.x, depth) ||
      !comp_compatible(img.y, in.y, depth))
    throw NotFixedAtDepth(depth);

  // The only candidate finite fixed point of length <= depth within
  // 2^-depth of the ball is the depth-truncation itself: any other
  // word disagrees with every completion too early.
  PairElement cand{word_prefix(p.x_prefix, depth), word_prefix(p.y_prefix, depth)};
  bool fixed_near = e.apply(cand) == cand;
  try {
    FixReport rep = fixed_subgroup(e, oracle);
    if (rep.membership_test && rep.membership_test(cand) != fixed_near)
      throw Error("fixed-subgroup membership disagrees with direct application");
  } catch (const OracleRequired&) {
    // membership was decided directly; a missing component basis only
    // blocks the generator list
  }

  BoundaryClass out;
  out.depth = depth;
  if (fixed_near) {
    out.classification.push_back(BoundaryVerdict::SingularAtDepth);
    out.fixed_witness = cand;
    return out;
  }
  out.classification.push_back(BoundaryVerdict::RegularAtDepth);

  long long keep = cfg.keep > 0 ? std::min(cfg.keep, depth)
                                : std::max<long long>(1, depth / 2);
  ProbeOutcome fwd = run_probes(e, p, depth, keep, cfg, false);
  out.probes = fwd.total;
  out.converged = fwd.converged;
  if (fwd.total > 0 && fwd.converged == fwd.total) {
    out.classification.push_back(BoundaryVerdict::AttractorEvidence);
    select_witnesses(fwd, out, cfg);
    return out;
  }

  if (e.flags().automorphism) {
    ProductEndo inv = e.inverse();
    ProbeOutcome bwd = run_probes(inv, p, depth, keep, cfg, true);
    out.inverse_probes = bwd.total;
    out.inverse_converged = bwd.converged;
    if (bwd.total > 0 && bwd.converged == bwd.total) {
      out.classification.push_back(BoundaryVerdict::RepellerEvidence);
      select_witnesses(bwd, out, cfg);
      return out;
    }
    out.classification.push_back(BoundaryVerdict::Inconclusive);
    select_witnesses(fwd, out, cfg);
    select_witnesses(bwd, out, cfg);
    return out;
  }

  out.classification.push_back(BoundaryVerdict::Inconclusive);
  select_witnesses(fwd, out, cfg);
  return out;
}

}  // namespace fnfm
