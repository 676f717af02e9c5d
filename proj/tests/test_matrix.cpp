#include <doctest.h>

#include "helpers.hpp"

#include <cmath>
#include <thread>

using namespace anisotl;
using namespace testutil;

TEST_SUITE("scalar") {
    TEST_CASE("rationals stay in lowest terms with positive denominator") {
        mpq_class q = parse_rational("6/4");
        CHECK(q == mpq_class(3, 2));
        CHECK(q.get_den() == 2);
        CHECK(parse_rational("-6/4") == mpq_class(-3, 2));
        CHECK(parse_rational("1.25") == mpq_class(5, 4));
        CHECK(parse_rational("-0.5") == mpq_class(-1, 2));
        CHECK(parse_rational("7") == 7);
        CHECK(format_rational(parse_rational("10/4")) == "5/2");
    }

    TEST_CASE("mixed-mode arithmetic is rejected") {
        scalar r = scalar::rational(1, 2);
        scalar f = scalar::floating(0.5);
        CHECK_THROWS_AS(r + f, std::invalid_argument);
        CHECK_THROWS_AS(f * r, std::invalid_argument);
        CHECK((r + r).rat() == 1);
        CHECK((f + f).to_double() == 1.0);
        CHECK(r.str() == "1/2");
        CHECK((-r).rat() == mpq_class(-1, 2));
    }

    TEST_CASE("exponents") {
        CHECK(exponent::parse("0.5") == exponent::of(1, 2));
        CHECK(exponent::parse("1/2") == exponent::of(1, 2));
        CHECK(exponent::parse("inf").is_inf());
        CHECK(exponent::parse("inf").reciprocal() == 0.0);
        CHECK(exponent::parse("2").reciprocal() == doctest::Approx(0.5));
        CHECK(exponent::parse("2") != exponent::parse("1/2"));
        CHECK(exponent::parse("2/4") == exponent::of(1, 2)); // canonicalized
        CHECK_THROWS_AS(exponent::parse("0"), std::invalid_argument);
        CHECK_THROWS_AS(exponent::parse("-1"), std::invalid_argument);
    }
}

TEST_SUITE("expansive") {
    TEST_CASE("diag(2,2) is expansive") {
        auto cert = certify_expansive(to_double_matrix(diag2("2", "2").rational_view()));
        CHECK(cert.status == expansive_status::expansive);
        CHECK(cert.method == "char-poly");
    }

    TEST_CASE("diag(2,1/2) is not expansive") {
        dmatrix m(2);
        m.at(0, 0) = 2;
        m.at(1, 1) = 0.5;
        auto cert = certify_expansive(m);
        CHECK(cert.status == expansive_status::not_expansive);
        CHECK_THROWS_AS(expansive_matrix::from_rational(
                            2, {mpq_class(2), mpq_class(0), mpq_class(0), mpq_class(1, 2)}),
                        not_expansive_error);
    }

    TEST_CASE("scaled rotation 2 R_1 is expansive with moduli 2") {
        auto cert = certify_expansive(scaled_rotation(2.0, 1.0));
        CHECK(cert.status == expansive_status::expansive);
        REQUIRE(cert.eigen_moduli.size() == 2);
        CHECK(cert.eigen_moduli[0] == doctest::Approx(2.0));
        CHECK(cert.eigen_moduli[1] == doctest::Approx(2.0));
    }

    TEST_CASE("singular matrix is invalid input") {
        dmatrix m(2); // zero matrix
        CHECK_THROWS_AS(certify_expansive(m), std::invalid_argument);
    }

    TEST_CASE("d = 3 characteristic polynomial") {
        // diag(2,3,4) and a matrix with a complex pair of modulus sqrt(8)
        dmatrix d3(3);
        d3.at(0, 0) = 2;
        d3.at(1, 1) = 3;
        d3.at(2, 2) = 4;
        auto cert = certify_expansive(d3);
        CHECK(cert.status == expansive_status::expansive);
        std::vector<double> mods = cert.eigen_moduli;
        std::sort(mods.begin(), mods.end());
        CHECK(mods[0] == doctest::Approx(2));
        CHECK(mods[1] == doctest::Approx(3));
        CHECK(mods[2] == doctest::Approx(4));

        // block diag(2 R_1, 3): eigenvalues 2 e^{+-i}, 3
        dmatrix b(3);
        b.at(0, 0) = 2 * std::cos(1.0);
        b.at(0, 1) = -2 * std::sin(1.0);
        b.at(1, 0) = 2 * std::sin(1.0);
        b.at(1, 1) = 2 * std::cos(1.0);
        b.at(2, 2) = 3;
        cert = certify_expansive(b);
        CHECK(cert.status == expansive_status::expansive);
        mods = cert.eigen_moduli;
        std::sort(mods.begin(), mods.end());
        CHECK(mods[0] == doctest::Approx(2));
        CHECK(mods[1] == doctest::Approx(2));
        CHECK(mods[2] == doctest::Approx(3));
    }

    TEST_CASE("d = 4 uses the Gelfand criterion") {
        dmatrix m(4);
        for (int i = 0; i < 4; ++i) m.at(i, i) = 2;
        m.at(0, 1) = 1;
        auto cert = certify_expansive(m);
        CHECK(cert.status == expansive_status::expansive);
        CHECK(cert.method == "gelfand");

        dmatrix bad(4);
        for (int i = 0; i < 4; ++i) bad.at(i, i) = 0.5;
        cert = certify_expansive(bad);
        CHECK(cert.status == expansive_status::not_expansive);
    }

    TEST_CASE("near-unit modulus is reported indeterminate, never a silent bool") {
        dmatrix m(4);
        m.at(0, 0) = 1.0 + 1e-9; // inside the theta margin
        for (int i = 1; i < 4; ++i) m.at(i, i) = 2;
        auto cert = certify_expansive(m);
        CHECK(cert.status == expansive_status::indeterminate);
        CHECK(cert.gelfand_n == 64);
        std::vector<double> entries = m.entries();
        CHECK_THROWS_AS(expansive_matrix::from_float(4, entries), indeterminate_error);
    }

    TEST_CASE("similarity invariance of expansiveness") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> lam(1.3, 3.0);
        std::uniform_real_distribution<double> small(0.3, 0.8);
        std::uniform_int_distribution<int> pe(-3, 3);
        int checked = 0;
        while (checked < 50) {
            dmatrix p(2);
            p.at(0, 0) = pe(rng);
            p.at(0, 1) = pe(rng);
            p.at(1, 0) = pe(rng);
            p.at(1, 1) = pe(rng);
            double det = p.at(0, 0) * p.at(1, 1) - p.at(0, 1) * p.at(1, 0);
            if (std::abs(det) < 1) continue;
            dmatrix d(2);
            d.at(0, 0) = lam(rng);
            d.at(1, 1) = -lam(rng);
            dmatrix conj = p * d * p.inverse();
            CHECK(certify_expansive(conj).status == expansive_status::expansive);
            // and a non-expansive spectrum stays non-expansive under conjugation
            d.at(1, 1) = small(rng);
            conj = p * d * p.inverse();
            CHECK(certify_expansive(conj).status == expansive_status::not_expansive);
            ++checked;
        }
    }
}

TEST_SUITE("matrix ops") {
    TEST_CASE("power examples") {
        auto m = diag2("2", "-2");
        qmatrix m2 = m.power_exact(2);
        CHECK(m2.at(0, 0) == 4);
        CHECK(m2.at(1, 1) == 4);
        CHECK(m2.at(0, 1) == 0);

        auto id_half = diag2("2", "2").power_exact(-1);
        CHECK(id_half.at(0, 0) == mpq_class(1, 2));
        CHECK(id_half.at(1, 1) == mpq_class(1, 2));

        auto rot = rotation2(2.0, 1.0);
        dmatrix r2 = rot.power(2);
        dmatrix expect = scaled_rotation(4.0, 2.0);
        CHECK(r2.max_entry_distance(expect) < 1e-12);
    }

    TEST_CASE("det_abs_pow examples") {
        CHECK(diag2("2", "-2").det_abs_pow(1.0) == doctest::Approx(4.0));
        CHECK(diag2("2", "2").det_abs_pow(-0.5) == doctest::Approx(0.5));
        CHECK(diag2("2", "-2").det_abs_pow(0.5) == doctest::Approx(2.0));
        CHECK(diag2("2", "-2").det_abs_pow_exact(2) == 16);
        CHECK(diag2("2", "-2").det_abs_pow_exact(-1) == mpq_class(1, 4));
    }

    TEST_CASE("matrix_equal") {
        auto a = diag2("2", "2");
        auto sq = expansive_matrix::from_rational(
            2, {mpq_class(4), mpq_class(0), mpq_class(0), mpq_class(4)});
        CHECK(a.power_exact(2).equals(sq.rational_view(), 0));

        auto r1 = rotation2(2.0, 1.0);
        auto r1b = rotation2(2.0, 1.0 + 2 * M_PI);
        // oracle: the double-precision deviation is tiny
        CHECK(r1.float_view().max_entry_distance(r1b.float_view()) < 1e-12);
        CHECK(matrix_equal(r1, r1b, 1e-9));

        CHECK_FALSE(matrix_equal(diag2("2", "2"), diag2("2", "-2")));
        CHECK_THROWS_AS(matrix_equal(diag2("2", "2"), r1), std::invalid_argument);
    }

    TEST_CASE("power additivity, exact and float") {
        auto m = rational_matrix({"2", "1", "-1", "3"});
        for (long a : {-3L, 2L, 5L})
            for (long b : {-2L, 4L}) {
                qmatrix lhs = m.power_exact(a + b);
                qmatrix rhs = m.power_exact(a) * m.power_exact(b);
                CHECK(lhs.equals(rhs, 0));
            }

        std::mt19937_64 rng(11);
        std::uniform_int_distribution<int> small(-4, 4);
        std::uniform_int_distribution<long> ex(-16, 16);
        for (int trial = 0; trial < 20; ++trial) {
            double a01 = small(rng) / 8.0, a10 = small(rng) / 8.0;
            auto m2 = float2(2.0 + small(rng) / 16.0, a01, a10, -2.0 + small(rng) / 16.0);
            long a = ex(rng), b = ex(rng);
            dmatrix lhs = m2.power(a + b);
            dmatrix rhs = m2.power(a) * m2.power(b);
            double scale = 1.0;
            for (const auto& e : lhs.entries()) scale = std::max(scale, std::abs(e));
            CHECK(lhs.max_entry_distance(rhs) / scale < 1e-9);
        }
    }

    TEST_CASE("det_abs_pow inverse pairs") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> xs(-3.0, 3.0);
        auto m = diag2("2", "-2");
        for (int i = 0; i < 20; ++i) {
            double x = xs(rng);
            CHECK(m.det_abs_pow(x) * m.det_abs_pow(-x) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("operator norm") {
        CHECK(operator_norm(scaled_rotation(2.0, 1.0)) == doctest::Approx(2.0));
        dmatrix m(2);
        m.at(0, 0) = 3;
        m.at(1, 1) = 1;
        CHECK(operator_norm(m) == doctest::Approx(3.0));
        // ||[[1,1],[0,1]]|| = golden ratio
        dmatrix shear(2);
        shear.at(0, 0) = 1;
        shear.at(0, 1) = 1;
        shear.at(1, 1) = 1;
        CHECK(operator_norm(shear) == doctest::Approx((1 + std::sqrt(5.0)) / 2));
    }

    TEST_CASE("mixed-mode matrix construction is rejected") {
        std::vector<scalar> entries{scalar::rational(2), scalar::floating(0.0),
                                    scalar::floating(0.0), scalar::rational(2)};
        CHECK_THROWS_AS(expansive_matrix::from_scalars(2, entries), std::invalid_argument);
    }

    TEST_CASE("shared matrices are safe across threads") {
        auto m = rational_matrix({"2", "1", "-1", "3"});
        std::vector<std::thread> workers;
        std::vector<std::vector<double>> norms(4);
        for (int w = 0; w < 4; ++w)
            workers.emplace_back([&, w] {
                for (long j = -12; j <= 12; ++j) norms[w].push_back(m.power_norm(j));
            });
        for (auto& t : workers) t.join();
        for (int w = 1; w < 4; ++w) CHECK(norms[w] == norms[0]);
        // memoized powers stay exact
        CHECK(m.power_exact(12).equals(m.power_exact(6) * m.power_exact(6), 0));
    }
}
