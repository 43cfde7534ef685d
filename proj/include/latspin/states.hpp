#ifndef LATSPIN_STATES_HPP
#define LATSPIN_STATES_HPP

#include <vector>

namespace latspin {

enum class SpinStateKind { product, unpolarized, dimer, trimer };

/// Declarative description of a spin-1 chain state.
///  - product: one definite m in {-1, 0, +1} per site
///  - unpolarized: defined by its moments alone (<rho> = 0, <rho^2> = 2/3)
///  - dimer: chain of two-site singlets (site count even)
///  - trimer: chain of three-site singlets (site count divisible by 3)
struct SpinStateSpec {
    SpinStateKind kind = SpinStateKind::unpolarized;
    int site_count = 1;
    std::vector<int> product_m;  // product only

    static SpinStateSpec product(std::vector<int> m);
    static SpinStateSpec unpolarized(int site_count);
    static SpinStateSpec dimer(int site_count);
    static SpinStateSpec trimer(int site_count);

    void validate() const;
};

/// Product state with m = +1 everywhere except m = 0 at defect_site (1-based)
SpinStateSpec defect_chain(int site_count, int defect_site);

/// First and second site moments of the z spin density:
/// means_j = <rho_{z,j}>, moment(j, r) = <rho_{z,j} rho_{z,r}>.
class CorrelationMatrix {
public:
    CorrelationMatrix(std::vector<double> means, std::vector<double> second_moments_row_major);

    int site_count() const { return site_count_; }
    double mean(int j) const { return means_[static_cast<std::size_t>(j)]; }
    double moment(int j, int r) const {
        return moments_[static_cast<std::size_t>(j) * site_count_ + r];
    }
    const std::vector<double>& means() const { return means_; }

private:
    int site_count_;
    std::vector<double> means_;
    std::vector<double> moments_;
};

/// Closed-form moments for any state spec.
CorrelationMatrix correlation_matrix(const SpinStateSpec& spec);

/// Independent oracle: builds the explicit state vector over the 3^M spin
/// basis (Eq.-level superpositions for dimer/trimer, basis vector for
/// product) and takes expectation values by direct summation. Limited to
/// M <= 12; rejects the unpolarized kind, which has no microstate here.
CorrelationMatrix state_vector_correlation_matrix(const SpinStateSpec& spec);

}  // namespace latspin

#endif
