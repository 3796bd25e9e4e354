#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fnfm/endo.hpp"
#include "fnfm/fixed.hpp"
#include "fnfm/word.hpp"

namespace fnfm {

/// A truncation of a point of the metric completion of the product: the
/// first `depth` letters of each component, fewer only when that component
/// is a finite word ending earlier.  The point stands for the set of all
/// completions matching it, so a prefix shorter than `depth` pins its
/// component exactly, while a prefix of full length `depth` is an open
/// ball of radius 2^-depth in that component.
///
/// Inputs require depth >= 1; results of iteration may degrade to depth 0
/// ("nothing guaranteed") when a component map admits too much
/// cancellation for the cheap bounds used here.
struct TruncatedPoint {
  FreeWord x_prefix;
  FreeWord y_prefix;
  long long depth = 1;

  friend bool operator==(const TruncatedPoint&, const TruncatedPoint&) = default;
};

enum class UCReason {
  /// Type IV, VI or VII and both driving component maps are trivial or
  /// injective: the map extends uniformly continuously to the boundary.
  UCTypeWithUCComponents,
  /// Types I, II, III and V never extend, whatever the component maps.
  TypeObstruction,
  /// Right type, but a driving component map is neither trivial nor
  /// injective.
  ComponentObstruction,
};

struct UCReport {
  bool uniformly_continuous = false;
  UCReason reason = UCReason::TypeObstruction;
  /// For ComponentObstruction: 1 if the map feeding the first output
  /// component fails, 2 for the second (the first failure is reported).
  int component = 0;
};

/// Decides whether the continuous extension to the boundary exists.
/// Requires a validated endomorphism (the ProductEndo invariant).
UCReport uniform_continuity(const ProductEndo& e);

/// Applies the boundary extension `steps` times to the set of points
/// described by `p`, returning one truncation per step.  Every letter in
/// an output prefix is guaranteed: it is shared by the images of all
/// completions of the previous truncation.  Deeper input prefixes can
/// only lengthen the guarantees, never contradict them.
///
/// depth_cap > 0 truncates the bookkeeping at that depth, keeping orbit
/// words small over long runs.  Throws NotUniformlyContinuous when the
/// extension does not exist, Error on malformed input, ResourceLimit if
/// intermediate words outgrow an internal cap.
std::vector<TruncatedPoint> iterate_truncated(const ProductEndo& e,
                                              const TruncatedPoint& p,
                                              long long steps,
                                              long long depth_cap = 0);

enum class BoundaryVerdict {
  /// A finite fixed point of length <= depth lies within 2^-depth of p.
  SingularAtDepth,
  /// No such finite fixed point: to the tested depth p looks like a
  /// regular (isolated from the fixed subgroup) boundary fixed point.
  RegularAtDepth,
  /// Every sampled perturbation flowed back into the 2^-depth ball
  /// around p and stayed there for two consecutive iterates.
  AttractorEvidence,
  /// Same, under the inverse automorphism.
  RepellerEvidence,
  /// The probes neither all converged forward nor all converged under an
  /// inverse (or no inverse exists); nothing is claimed.
  Inconclusive,
};

std::string boundary_verdict_name(BoundaryVerdict v);

/// One sampled perturbation orbit, replayable: start is an exact point
/// (both prefixes shorter than depth), orbit holds its truncated images
/// under the probed map, entered_at the first step of the convergence
/// window (-1 if it never converged within the budget).
struct OrbitWitness {
  TruncatedPoint start;
  std::vector<TruncatedPoint> orbit;
  long long entered_at = -1;
  bool under_inverse = false;
};

struct ProbeConfig {
  /// Letters of each prefix kept before the perturbed suffix; 0 picks
  /// half the tested depth.  Perturbations then sit at distance below
  /// 2^-keep from p.
  long long keep = 0;
  /// Exhaustive reduced suffixes up to this length replace the dropped
  /// tail (deterministic, no sampling).
  long long suffix_len = 3;
  /// Iteration budget per probe orbit.
  long long budget = 32;
  /// At most this many witness orbits are stored, non-convergent and
  /// slowest first.
  long long witness_cap = 8;
};

struct BoundaryClass {
  /// Primary verdict first (SingularAtDepth or RegularAtDepth), followed
  /// for regular points by the probe outcome (AttractorEvidence,
  /// RepellerEvidence or Inconclusive).
  std::vector<BoundaryVerdict> classification;
  long long depth = 0;
  /// The nearby finite fixed point behind a SingularAtDepth verdict.
  std::optional<PairElement> fixed_witness;
  long long probes = 0;
  long long converged = 0;
  long long inverse_probes = 0;
  long long inverse_converged = 0;
  std::vector<OrbitWitness> witnesses;
};

/// Classifies a boundary point that is fixed to the tested depth.  All
/// claims are depth- and budget-relative: SingularAtDepth and
/// RegularAtDepth are exact statements about finite fixed points of
/// length <= depth, while the evidence verdicts report exhaustive probe
/// outcomes, not theorems.
///
/// Requires: uniform continuity (else NotUniformlyContinuous); depth >= 1
/// and every open component of p known to at least `depth` letters (else
/// Error).  Throws NotFixedAtDepth when applying e to p provably moves
/// some completion-visible letter within the tested depth; when the
/// cheap image bounds cannot confirm fixedness the precondition is
/// trusted.  The oracle, when given, feeds the fixed-subgroup report
/// used to cross-check the finite fixed point scan.
BoundaryClass boundary_fixed_classify(
    const ProductEndo& e, const TruncatedPoint& p, long long depth,
    const std::optional<SubgroupBasisInput>& oracle = std::nullopt,
    const ProbeConfig& cfg = {});

}  // namespace fnfm
