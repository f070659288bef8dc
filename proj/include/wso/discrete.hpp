#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "wso/errors.hpp"
#include "wso/prng.hpp"
#include "wso/verdict.hpp"

namespace wso {

using Complex = std::complex<double>;

// Two-sided coefficient sequence (a(k)) on Z with nonzero limits at both
// infinities. Values outside the stored window equal the limits exactly, so
// finite computations beyond the transient are faithful to the infinite
// operator aW, (aW u)(k) = a(k) u(k+1) on l2(Z).
class CoeffSeq {
public:
    // window_values covers k in [-K, K]; size must be odd.
    CoeffSeq(std::vector<double> window_values, double a_minus, double a_plus);

    // Pure step sequence: a(k) = a_minus for k < 0, a_plus for k >= 0.
    static CoeffSeq step(double a_minus, double a_plus);

    double at(long k) const {
        const long K = window_radius();
        if (k < -K) return a_minus_;
        if (k > K) return a_plus_;
        return values_[static_cast<std::size_t>(k + K)];
    }

    long window_radius() const { return (static_cast<long>(values_.size()) - 1) / 2; }
    double a_minus() const { return a_minus_; }
    double a_plus() const { return a_plus_; }

private:
    std::vector<double> values_;
    double a_minus_;
    double a_plus_;
};

// Finitely supported two-sided vector; values cover k in
// [offset, offset + size).
struct LatticeVector {
    long offset = 0;
    std::vector<Complex> values;

    Complex at(long k) const {
        const long i = k - offset;
        if (i < 0 || i >= static_cast<long>(values.size())) return {0.0, 0.0};
        return values[static_cast<std::size_t>(i)];
    }
    long first() const { return offset; }
    long last() const { return offset + static_cast<long>(values.size()) - 1; }
    double norm2() const;
    double norm_inf() const;

    static LatticeVector delta(long k);
};

// Spectrum ring of aW: radii are the moduli of the limits.
Annulus discrete_annulus(const CoeffSeq& seq);

// Relative circle test used throughout the discrete module.
bool on_limit_circle(const CoeffSeq& seq, Complex lambda, double tol = 1e-12);

// The l2 solution of (aW - lambda) u = 0 normalized to u(0) = 1, truncated
// where |u| < 1e-16. Exists exactly when |a(-inf)| < |lambda| < |a(+inf)|;
// returns nullopt in every other off-circle regime. Throws RegimeError when
// |lambda| sits on a limit circle or lambda == 0.
std::optional<LatticeVector> kernel_vector(const CoeffSeq& seq, Complex lambda,
                                           double circle_tol = 1e-12);

// Right-regime inverse: the solution of (aW - lambda) u = f anchored at
// u(0) = 0, computed by the forward recursion for k >= 0 and the backward
// recursion for k < 0. f must be finitely supported. The residual vanishes
// identically on the computed window and ||u||_2 <= C ||f||_2 with
// C = right_inverse_norm_constant(seq, lambda).
LatticeVector right_inverse_apply(const CoeffSeq& seq, Complex lambda, const LatticeVector& f);

// Explicit geometric-series bound for the right inverse operator norm.
double right_inverse_norm_constant(const CoeffSeq& seq, Complex lambda);

struct ShootResult {
    LatticeVector u;
    double mismatch = 0.0;  // |u_left(0) - u_right(0)| / (1 + ||f||_2)
};

// Left-regime solver (|a(+inf)| < |lambda| < |a(-inf)|): shoot the forward
// recursion from u(-N) = 0 and the backward recursion from u(+N) = 0 and
// compare at the center. mismatch ~ 0 iff f lies in the range of
// aW - lambda.
ShootResult shoot_solve(const CoeffSeq& seq, Complex lambda, const LatticeVector& f,
                        long truncation);

// Upper-bidiagonal truncation of aW - lambda I to the window [-N, N]:
// M[i][i] = -lambda, M[i][i+1] = a(i - N).
class FiniteSection {
public:
    FiniteSection(const CoeffSeq& seq, Complex lambda, int half_width);

    int half_width() const { return half_width_; }
    int size() const { return 2 * half_width_ + 1; }

    // Smallest eigenvalue of M*M, i.e. the squared smallest singular value
    // of the section. Computed by Sturm-count bisection on the real
    // tridiagonal normal matrix (relative tolerance 1e-10); the tridiagonal
    // entries come straight from the bidiagonal band. This squared quantity
    // is what every ladder threshold in this module is calibrated against.
    double sigma_min() const;

    // Two smallest eigenvalues of M*M.
    std::pair<double, double> sigma_pair() const;

    // How many eigenvalues of M*M lie below the threshold.
    int count_below(double threshold) const;

    // y = M x and y = M* x on dense windows of this section's size.
    std::vector<Complex> apply(const std::vector<Complex>& x) const;
    std::vector<Complex> apply_adjoint(const std::vector<Complex>& x) const;

private:
    double kth_eigenvalue(int k) const;  // k-th smallest of M*M, 0-based

    std::vector<double> super_;  // a(k), k = -N .. N-1
    Complex lambda_;
    int half_width_;
};

// Fredholm index of aW - lambda I: +1 in the right regime, -1 in the left
// regime, 0 when |lambda| lies outside both one-sided bands. Throws
// RegimeError on a limit circle or at lambda = 0.
int index_of(const CoeffSeq& seq, Complex lambda, double circle_tol = 1e-12);

struct SigmaLadderEntry {
    int half_width = 0;
    double sigma_min = 0.0;
    double second_smallest = 0.0;
};

enum class LadderSignature { BoundedBelow, Decaying, Gray };

// Ladder heuristic with pinned thresholds: "Decaying" when the last rung is
// below 0.1x the first with no plateau above 1e-6, "BoundedBelow" when the
// last rung keeps at least half the first. Anything else is "Gray".
LadderSignature ladder_signature(const std::vector<double>& rungs);

// Everything verify_block measured, next to what the classifier predicted.
struct OracleReport {
    BlockPrediction predicted;
    int kernel_dim_estimate = 0;  // decaying kernel recursion found (0/1)
    int coker_dim_estimate = 0;   // decaying adjoint recursion found (0/1)
    int index_estimate = 0;
    std::vector<SigmaLadderEntry> ladder;
    double right_inverse_residual = -1.0;  // right regime only
    double right_inverse_norm_ratio = -1.0;
    double recovery_error = -1.0;  // left regime only
    double shooting_mismatch = -1.0;
    bool agreement = false;
    std::vector<std::string> diagnostics;
};

// Block-level prediction from the limit moduli alone.
BlockPrediction predict_block(double a_minus_mod, double a_plus_mod, Complex lambda,
                              double circle_tol = 1e-12);

// Run the full numerical battery against a prediction: kernel/adjoint
// recursions, the sigma ladder, and the regime-appropriate inverse solve.
OracleReport verify_block(const CoeffSeq& seq, Complex lambda, const BlockPrediction& predicted,
                          const std::vector<int>& truncations, Prng& rng);

}  // namespace wso
