#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "latspin/model.hpp"
#include "latspin/states.hpp"

using namespace latspin;

namespace {

double max_entry_difference(const CorrelationMatrix& a, const CorrelationMatrix& b) {
    REQUIRE(a.site_count() == b.site_count());
    double worst = 0.0;
    for (int j = 0; j < a.site_count(); ++j) {
        worst = std::max(worst, std::abs(a.mean(j) - b.mean(j)));
        for (int r = 0; r < a.site_count(); ++r)
            worst = std::max(worst, std::abs(a.moment(j, r) - b.moment(j, r)));
    }
    return worst;
}

}  // namespace

TEST_CASE("dimer closed form") {
    const auto corr = correlation_matrix(SpinStateSpec::dimer(2));
    CHECK(corr.mean(0) == 0.0);
    CHECK(corr.mean(1) == 0.0);
    CHECK(corr.moment(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(corr.moment(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(corr.moment(0, 1) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));

    // no correlation across pair boundaries
    const auto corr4 = correlation_matrix(SpinStateSpec::dimer(4));
    CHECK(corr4.moment(1, 2) == 0.0);
    CHECK(corr4.moment(0, 3) == 0.0);
}

TEST_CASE("trimer closed form") {
    const auto corr = correlation_matrix(SpinStateSpec::trimer(3));
    for (int j = 0; j < 3; ++j) CHECK(corr.moment(j, j) == doctest::Approx(2.0 / 3.0));
    CHECK(corr.moment(0, 1) == doctest::Approx(-1.0 / 3.0));
    CHECK(corr.moment(0, 2) == doctest::Approx(-1.0 / 3.0));
    CHECK(corr.moment(1, 2) == doctest::Approx(-1.0 / 3.0));

    const auto corr6 = correlation_matrix(SpinStateSpec::trimer(6));
    CHECK(corr6.moment(2, 3) == 0.0);  // different triples
}

TEST_CASE("unpolarized closed form") {
    const auto corr = correlation_matrix(SpinStateSpec::unpolarized(5));
    for (int j = 0; j < 5; ++j) {
        CHECK(corr.mean(j) == 0.0);
        CHECK(corr.moment(j, j) == doctest::Approx(2.0 / 3.0));
        for (int r = 0; r < 5; ++r)
            if (r != j) CHECK(corr.moment(j, r) == 0.0);
    }
}

TEST_CASE("product state factorizes") {
    const auto corr = correlation_matrix(SpinStateSpec::product({1, 1, 0, 1}));
    CHECK(corr.mean(0) == 1.0);
    CHECK(corr.mean(2) == 0.0);
    CHECK(corr.moment(0, 1) == 1.0);
    CHECK(corr.moment(0, 2) == 0.0);
    CHECK(corr.moment(2, 2) == 0.0);
    CHECK(corr.moment(3, 3) == 1.0);
}

TEST_CASE("state-vector oracle agrees with the closed forms") {
    for (int m : {2, 4, 6, 8}) {
        const auto spec = SpinStateSpec::dimer(m);
        CHECK(max_entry_difference(correlation_matrix(spec),
                                   state_vector_correlation_matrix(spec)) < 1e-12);
    }
    for (int m : {3, 6}) {
        const auto spec = SpinStateSpec::trimer(m);
        CHECK(max_entry_difference(correlation_matrix(spec),
                                   state_vector_correlation_matrix(spec)) < 1e-12);
    }
    for (const auto& m : {std::vector<int>{1, 0}, std::vector<int>{-1, 1, 0, 0, 1}}) {
        const auto spec = SpinStateSpec::product(m);
        CHECK(max_entry_difference(correlation_matrix(spec),
                                   state_vector_correlation_matrix(spec)) < 1e-12);
    }
}

TEST_CASE("oracle limits") {
    CHECK_THROWS_AS(state_vector_correlation_matrix(SpinStateSpec::dimer(14)),
                    std::invalid_argument);
    CHECK_THROWS_AS(state_vector_correlation_matrix(SpinStateSpec::unpolarized(4)),
                    std::invalid_argument);
}

TEST_CASE("singlet block sum rule") {
    // a singlet block has zero total-spin variance: the moment rows sum to
    // zero inside each block
    const auto dimer = correlation_matrix(SpinStateSpec::dimer(6));
    for (int j = 0; j < 6; ++j) {
        const int base = (j / 2) * 2;
        CHECK(std::abs(dimer.moment(j, base) + dimer.moment(j, base + 1)) < 1e-15);
    }
    const auto trimer = correlation_matrix(SpinStateSpec::trimer(6));
    for (int j = 0; j < 6; ++j) {
        const int base = (j / 3) * 3;
        double row = 0.0;
        for (int r = base; r < base + 3; ++r) row += trimer.moment(j, r);
        CHECK(std::abs(row) < 1e-15);
    }
}

TEST_CASE("defect chain") {
    const auto spec = defect_chain(4, 2);
    CHECK(spec.product_m == std::vector<int>{1, 0, 1, 1});
    CHECK(defect_chain(1, 1).product_m == std::vector<int>{0});

    // fig2 layout: chain placed so the defect site carries x = -0.45
    const LatticeGeometry lattice(5, 0.9, -0.45);
    CHECK(lattice.site_position(2) == doctest::Approx(-0.45).epsilon(1e-14));
    const auto fig2 = defect_chain(5, 3);
    CHECK(fig2.product_m[2] == 0);

    CHECK_THROWS_AS(defect_chain(4, 0), std::invalid_argument);
    CHECK_THROWS_AS(defect_chain(4, 5), std::invalid_argument);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(SpinStateSpec::dimer(5), std::invalid_argument);
    CHECK_THROWS_AS(SpinStateSpec::trimer(4), std::invalid_argument);
    CHECK_THROWS_AS(SpinStateSpec::product({2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(SpinStateSpec::unpolarized(0), std::invalid_argument);
}

TEST_CASE("correlation matrix validation") {
    const std::vector<double> two_means = {0.0, 0.0};
    const std::vector<double> asymmetric = {1.0, 0.2, 0.3, 1.0};
    CHECK_THROWS_AS(CorrelationMatrix(two_means, asymmetric), std::invalid_argument);

    const std::vector<double> one_mean = {1.0};
    const std::vector<double> below_variance = {0.5};
    CHECK_THROWS_AS(CorrelationMatrix(one_mean, below_variance), std::invalid_argument);

    const std::vector<double> zero_mean = {0.0};
    const std::vector<double> wrong_size = {0.5, 0.5};
    CHECK_THROWS_AS(CorrelationMatrix(zero_mean, wrong_size), std::invalid_argument);
}
