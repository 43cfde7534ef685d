#include "latspin/states.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace latspin {

namespace {

void check_site_count(int site_count) {
    if (site_count < 1)
        throw std::invalid_argument("SpinStateSpec: site count must be at least 1");
}

}  // namespace

SpinStateSpec SpinStateSpec::product(std::vector<int> m) {
    SpinStateSpec spec;
    spec.kind = SpinStateKind::product;
    spec.site_count = static_cast<int>(m.size());
    spec.product_m = std::move(m);
    spec.validate();
    return spec;
}

SpinStateSpec SpinStateSpec::unpolarized(int site_count) {
    SpinStateSpec spec;
    spec.kind = SpinStateKind::unpolarized;
    spec.site_count = site_count;
    spec.validate();
    return spec;
}

SpinStateSpec SpinStateSpec::dimer(int site_count) {
    SpinStateSpec spec;
    spec.kind = SpinStateKind::dimer;
    spec.site_count = site_count;
    spec.validate();
    return spec;
}

SpinStateSpec SpinStateSpec::trimer(int site_count) {
    SpinStateSpec spec;
    spec.kind = SpinStateKind::trimer;
    spec.site_count = site_count;
    spec.validate();
    return spec;
}

void SpinStateSpec::validate() const {
    check_site_count(site_count);
    switch (kind) {
    case SpinStateKind::product:
        if (static_cast<int>(product_m.size()) != site_count)
            throw std::invalid_argument("SpinStateSpec: product state needs one m per site");
        for (int m : product_m)
            if (m < -1 || m > 1)
                throw std::invalid_argument("SpinStateSpec: product m values must be in {-1,0,1}");
        break;
    case SpinStateKind::dimer:
        if (site_count % 2 != 0)
            throw std::invalid_argument("SpinStateSpec: dimer state needs an even site count");
        break;
    case SpinStateKind::trimer:
        if (site_count % 3 != 0)
            throw std::invalid_argument(
                "SpinStateSpec: trimer state needs a site count divisible by 3");
        break;
    case SpinStateKind::unpolarized:
        break;
    }
}

SpinStateSpec defect_chain(int site_count, int defect_site) {
    check_site_count(site_count);
    if (defect_site < 1 || defect_site > site_count)
        throw std::invalid_argument("defect_chain: defect site out of range");
    std::vector<int> m(static_cast<std::size_t>(site_count), 1);
    m[static_cast<std::size_t>(defect_site - 1)] = 0;
    return SpinStateSpec::product(std::move(m));
}

CorrelationMatrix::CorrelationMatrix(std::vector<double> means,
                                     std::vector<double> second_moments_row_major)
    : site_count_(static_cast<int>(means.size())), means_(std::move(means)),
      moments_(std::move(second_moments_row_major)) {
    const std::size_t m = means_.size();
    if (moments_.size() != m * m)
        throw std::invalid_argument("CorrelationMatrix: moment matrix size mismatch");
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t r = j + 1; r < m; ++r)
            if (std::abs(moments_[j * m + r] - moments_[r * m + j]) > 1e-12)
                throw std::invalid_argument("CorrelationMatrix: second moments must be symmetric");
        const double diag = moments_[j * m + j];
        if (diag < 0.0 || diag < means_[j] * means_[j] - 1e-12)
            throw std::invalid_argument(
                "CorrelationMatrix: diagonal moment below the variance bound");
    }
}

CorrelationMatrix correlation_matrix(const SpinStateSpec& spec) {
    spec.validate();
    const int n = spec.site_count;
    std::vector<double> means(static_cast<std::size_t>(n), 0.0);
    std::vector<double> mom(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int j, int r) -> double& { return mom[static_cast<std::size_t>(j) * n + r]; };

    switch (spec.kind) {
    case SpinStateKind::product:
        for (int j = 0; j < n; ++j) means[static_cast<std::size_t>(j)] = spec.product_m[j];
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < n; ++r)
                at(j, r) = static_cast<double>(spec.product_m[j]) * spec.product_m[r];
        break;
    case SpinStateKind::unpolarized:
        for (int j = 0; j < n; ++j) at(j, j) = 2.0 / 3.0;
        break;
    case SpinStateKind::dimer:
        for (int j = 0; j < n; ++j) at(j, j) = 2.0 / 3.0;
        for (int j = 0; j < n; j += 2) {
            at(j, j + 1) = -2.0 / 3.0;
            at(j + 1, j) = -2.0 / 3.0;
        }
        break;
    case SpinStateKind::trimer:
        for (int j = 0; j < n; ++j) at(j, j) = 2.0 / 3.0;
        for (int b = 0; b < n; b += 3)
            for (int u = 0; u < 3; ++u)
                for (int v = 0; v < 3; ++v)
                    if (u != v) at(b + u, b + v) = -1.0 / 3.0;
        break;
    }
    return CorrelationMatrix(std::move(means), std::move(mom));
}

namespace {

// One singlet block as (digit pattern, amplitude) pairs. Digits are m + 1,
// least-significant site first within the block.
struct BlockComponent {
    int digits;
    double amplitude;
};

// (|+>_2 |->_1 + |->_2 |+>_1 - |0>_2 |0>_1) / sqrt(3)
std::vector<BlockComponent> dimer_block() {
    const double a = 1.0 / std::sqrt(3.0);
    // (m1, m2): (-,+), (+,-), (0,0)
    return {{(0) + 3 * (2), a}, {(2) + 3 * (0), a}, {(1) + 3 * (1), -a}};
}

// (|+0-> + |-+0> + |0-+> - |+-0> - |0+-> - |-0+>) / sqrt(6),
// |m1 m2 m3> on sites (3j-2, 3j-1, 3j)
std::vector<BlockComponent> trimer_block() {
    const double a = 1.0 / std::sqrt(6.0);
    auto idx = [](int m1, int m2, int m3) {
        return (m1 + 1) + 3 * (m2 + 1) + 9 * (m3 + 1);
    };
    return {{idx(+1, 0, -1), a},  {idx(-1, +1, 0), a},  {idx(0, -1, +1), a},
            {idx(+1, -1, 0), -a}, {idx(0, +1, -1), -a}, {idx(-1, 0, +1), -a}};
}

std::vector<double> build_state_vector(const SpinStateSpec& spec) {
    std::vector<double> state{1.0};
    std::size_t dim = 1;

    auto append_block = [&](const std::vector<BlockComponent>& block, int block_sites) {
        std::size_t block_dim = 1;
        for (int i = 0; i < block_sites; ++i) block_dim *= 3;
        std::vector<double> next(dim * block_dim, 0.0);
        for (const auto& comp : block)
            for (std::size_t o = 0; o < dim; ++o)
                next[static_cast<std::size_t>(comp.digits) * dim + o] =
                    comp.amplitude * state[o];
        state = std::move(next);
        dim *= block_dim;
    };

    switch (spec.kind) {
    case SpinStateKind::product: {
        std::vector<BlockComponent> site(1);
        for (int j = 0; j < spec.site_count; ++j) {
            site[0] = {spec.product_m[j] + 1, 1.0};
            append_block(site, 1);
        }
        break;
    }
    case SpinStateKind::dimer:
        for (int b = 0; b < spec.site_count; b += 2) append_block(dimer_block(), 2);
        break;
    case SpinStateKind::trimer:
        for (int b = 0; b < spec.site_count; b += 3) append_block(trimer_block(), 3);
        break;
    case SpinStateKind::unpolarized:
        throw std::invalid_argument(
            "state_vector_correlation_matrix: the unpolarized state is a moment "
            "specification with no microstate");
    }
    return state;
}

}  // namespace

CorrelationMatrix state_vector_correlation_matrix(const SpinStateSpec& spec) {
    spec.validate();
    if (spec.site_count > 12)
        throw std::invalid_argument(
            "state_vector_correlation_matrix: state vector too large (site count > 12)");

    const std::vector<double> state = build_state_vector(spec);
    const int n = spec.site_count;
    std::vector<double> means(static_cast<std::size_t>(n), 0.0);
    std::vector<double> mom(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<int> m_of_site(static_cast<std::size_t>(n));

    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        const double w = state[idx] * state[idx];
        if (w == 0.0) continue;
        std::size_t rest = idx;
        for (int j = 0; j < n; ++j) {
            m_of_site[static_cast<std::size_t>(j)] = static_cast<int>(rest % 3) - 1;
            rest /= 3;
        }
        for (int j = 0; j < n; ++j) {
            means[static_cast<std::size_t>(j)] += w * m_of_site[j];
            for (int r = 0; r < n; ++r)
                mom[static_cast<std::size_t>(j) * n + r] += w * m_of_site[j] * m_of_site[r];
        }
    }
    return CorrelationMatrix(std::move(means), std::move(mom));
}

}  // namespace latspin
