#ifndef CHSH_MEASUREMENTS_HPP
#define CHSH_MEASUREMENTS_HPP

#include "chsh/qmath.hpp"
#include "chsh/states.hpp"

#include <utility>

namespace chsh {

/// Dichotomic observable: Hermitian, squares to identity.
struct Observable {
    CMatrix matrix;
};

/// Two-outcome projective measurement {P0, P1} for one input label.
struct ProjectivePair {
    CMatrix p0;
    CMatrix p1;
    int input_label = 0; // y
};

struct ObservablePair {
    Observable a0;
    Observable a1;
};

struct PairSet {
    ProjectivePair y0;
    ProjectivePair y1;
};

/// One shared-randomness branch of the strategy: Alice's observables at
/// the branch angle, Bob1's projective pairs, and the pairs the second
/// (and later) observers reuse.
struct StrategyBranch {
    ObservablePair alice;
    PairSet bob1;
    PairSet bob2;
    double theta = 0.0;
};

struct StrategyBundle {
    StrategyBranch branch1; // lambda = 1
    StrategyBranch branch2; // lambda = 2
    double mix_p = 1.0;     // probability of lambda = 1
};

/// sigma_1 or sigma_3.
CMatrix pauli(int which);

void validate_observable(const Observable& obs);
void validate_pair(const ProjectivePair& pair);

/// I_{d/2} (x) block for even d; for odd d the same on the leading d-1
/// dimensions with a trailing diagonal +1.
CMatrix tiled_block(int dim, const CMatrix& block2);

/// A0 = tiles of (cos t s3 + sin t s1), A1 with the sign flipped.
ObservablePair alice_observables(int s, double theta);

/// Case (i) Bob pairs: P0|0 from the sigma_3 tiling, P0|1 from sigma_1.
PairSet bob_pairs_case1(int t);

/// Case (ii) Bob1 pairs: y=0 is the trivial measurement (I, 0), y=1 as
/// in case (i).
PairSet bob_pairs_case2(int t);

/// Case (ii) second-observer observables (Z-type, X-type tilings).
ObservablePair bob2_observables_case2(int t);

Observable observable_of(const ProjectivePair& pair);
ProjectivePair pair_of(const Observable& obs, int input_label);

/// Assembles the full two-branch strategy for a spec. Branch 1 pairs are
/// reused by every observer; branch 2 gives observer >= 2 the Z/X
/// observables.
StrategyBundle default_bundle(const SchmidtSpec& spec, double theta1, double theta2, double mix_p);

/// The angles maximizing each branch: arctan K and arctan 2K.
std::pair<double, double> default_angles(const SchmidtSpec& spec);

} // namespace chsh

#endif
