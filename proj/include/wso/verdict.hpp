#pragma once

#include <complex>
#include <string>
#include <vector>

namespace wso {

// Spectral annulus {r <= |lambda| <= R}.
struct Annulus {
    double r = 0.0;
    double R = 0.0;
};

enum class ClassStatus {
    OutsideSpectrum,   // B - lambda I invertible
    RightInvertible,   // surjective, infinite-dimensional kernel
    LeftInvertible,    // injective with closed range
    NotOneSided,       // neither one-sided inverse exists
    OnCircle,          // |lambda| equals some |a(F)|; no valid decomposition
};

enum class KernelVerdict { Zero, InfiniteDim, Unknown };

enum class RangeVerdict { Closed, DenseNotClosed, ClosedNotDense, NotClosed, Unknown };

enum class Provenance { MainTheorem, SimplexTheorem, Both };

// Full spectral verdict for B - lambda I.
struct Classification {
    std::complex<double> lambda;
    ClassStatus status = ClassStatus::OutsideSpectrum;
    KernelVerdict kernel = KernelVerdict::Unknown;
    RangeVerdict range = RangeVerdict::Unknown;
    Provenance provenance = Provenance::MainTheorem;
    std::vector<int> circle_hits;  // vertex ids with |a(F)| == |lambda|
};

// What the graph-level classifier expects of a single orbit block, in the
// language the discrete oracle can check.
struct BlockPrediction {
    ClassStatus status = ClassStatus::OutsideSpectrum;
    int expected_index = 0;  // Fredholm index: +1 right, -1 left, 0 invertible
};

const char* to_string(ClassStatus s);
const char* to_string(KernelVerdict k);
const char* to_string(RangeVerdict r);
const char* to_string(Provenance p);

}  // namespace wso
