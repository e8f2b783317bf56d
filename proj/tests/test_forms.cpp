#include "g2/forms.hpp"
#include "g2/json_io.hpp"

#include <doctest.h>

#include <random>

using namespace g2;

namespace {

// Independent Hodge-star oracle for the identity metric: the defining
// relation dx^K ^ *(a) = a_K vol fixes (*a)_{K^c} monomial by monomial.
FormQ star_euclidean_oracle(const FormQ& a) {
    FormQ out(7 - a.degree);
    int n = ext7::degree_size(a.degree);
    for (int r = 0; r < n; ++r) {
        unsigned k = ext7::mask_of_rank(a.degree, r);
        unsigned kc = ext7::complement(k);
        int s = ext7::sign_merge(k, kc);
        out.set(kc, Rat(s) * a[r]);
    }
    return out;
}

Mat7<Rat> random_rational_matrix(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
    Mat7<Rat> m;
    for (int i = 0; i < 49; ++i) {
        int n = num(rng), d = den(rng);
        m[i] = rat(n, d);
    }
    return m;
}

FormQ random_form(std::mt19937_64& rng, int degree) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 4);
    FormQ f(degree);
    for (auto& c : f.c) {
        int n = num(rng), d = den(rng);
        c = rat(n, d);
    }
    return f;
}

} // namespace

TEST_CASE("phi0 support matches the seven stated monomials") {
    FormQ phi0 = standard_phi0<Rat>();
    CHECK(phi0.coeff(0b0000111) == Rat(1));  // 123
    CHECK(phi0.coeff(0b0011001) == Rat(1));  // 145
    CHECK(phi0.coeff(0b1100001) == Rat(1));  // 167
    CHECK(phi0.coeff(0b0101010) == Rat(1));  // 246
    CHECK(phi0.coeff(0b1010010) == Rat(-1)); // 257
    CHECK(phi0.coeff(0b1001100) == Rat(-1)); // 347
    CHECK(phi0.coeff(0b0110100) == Rat(-1)); // 356
    int nonzero = 0;
    for (const auto& c : phi0.c)
        if (sgn(c) != 0) ++nonzero;
    CHECK(nonzero == 7);
}

TEST_CASE("phi0 evaluation on basis triples") {
    FormQ phi0 = standard_phi0<Rat>();
    auto e = [](int i) {
        std::array<Rat, 7> v{};
        v[static_cast<size_t>(i - 1)] = Rat(1);
        return v;
    };
    CHECK(evaluate(phi0, {e(1), e(2), e(3)}) == Rat(1));
    CHECK(evaluate(phi0, {e(2), e(5), e(7)}) == Rat(-1));
    CHECK(evaluate(phi0, {e(1), e(2), e(4)}) == Rat(0));
    // antisymmetry
    CHECK(evaluate(phi0, {e(2), e(1), e(3)}) == Rat(-1));
}

TEST_CASE("wedge basics") {
    FormQ d1 = dx<Rat>({1}), d2 = dx<Rat>({2});
    CHECK(wedge(d1, d2) == dx<Rat>({1, 2}));
    CHECK(wedge(d2, d1) == -dx<Rat>({1, 2}));

    FormQ phi0 = standard_phi0<Rat>();
    CHECK(wedge(phi0, phi0).is_zero());

    CHECK_THROWS_AS(wedge(dx<Rat>({1, 2, 3, 4}), dx<Rat>({4, 5, 6, 7})),
                    std::invalid_argument);
}

TEST_CASE("wedge associativity on random forms") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        int p = 1 + static_cast<int>(rng() % 2), q = 1 + static_cast<int>(rng() % 2),
            r = 1 + static_cast<int>(rng() % 2);
        if (p + q + r > 7) continue;
        FormQ a = random_form(rng, p), b = random_form(rng, q), c = random_form(rng, r);
        CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
    }
    // bilinearity
    FormQ a = random_form(rng, 2), b = random_form(rng, 2), c = random_form(rng, 3);
    CHECK(wedge(a + b, c) == wedge(a, c) + wedge(b, c));
}

TEST_CASE("graded commutativity on random forms") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        int p = static_cast<int>(rng() % 4), q = static_cast<int>(rng() % 4);
        if (p + q > 7) continue;
        FormQ a = random_form(rng, p), b = random_form(rng, q);
        FormQ ab = wedge(a, b), ba = wedge(b, a);
        if ((p * q) % 2 == 1) ba = -ba;
        CHECK(ab == ba);
    }
}

TEST_CASE("wedge with the dual gives 7 vol") {
    FormQ phi0 = standard_phi0<Rat>();
    MetricQ m = metric_from_three_form(phi0);
    FormQ star = hodge_star(m, phi0);
    FormQ w = wedge(phi0, star);
    CHECK(w.degree == 7);
    CHECK(w.c[0] == Rat(7));
}

TEST_CASE("metric reconstruction at phi0") {
    MetricQ m = metric_from_three_form(standard_phi0<Rat>());
    CHECK(m.g == mat7_identity<Rat>());
    CHECK(m.volume == Rat(1));
    CHECK(m.orientation == 1);
}

TEST_CASE("scaled phi0: metric c^{2/3} identity") {
    // exact domain at c = 8 (cube): metric 4 I, volume 4^{7/2} = 128
    FormQ phi = Rat(8) * standard_phi0<Rat>();
    MetricQ m = metric_from_three_form(phi);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) CHECK(at(m.g, i, j) == (i == j ? Rat(4) : Rat(0)));
    CHECK(m.volume == Rat(128));

    // real domain at a generic scale, oracle: pullback under x -> lambda x
    double c = 1.7;
    FormR phir = c * to_real(standard_phi0<Rat>());
    MetricR mr = metric_from_three_form(phir);
    double expect = std::pow(c, 2.0 / 3.0);
    for (int i = 0; i < 7; ++i) CHECK(at(mr.g, i, i) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("degenerate and non-positive forms") {
    CHECK_THROWS_AS(metric_from_three_form(dx<Rat>({1, 2, 3})), PositivityError);
    CHECK_FALSE(is_positive(dx<Rat>({1, 2, 3})));
    FormQ zero(3);
    CHECK_FALSE(is_positive(zero));
    CHECK(is_positive(standard_phi0<Rat>()));
    CHECK(is_positive(-standard_phi0<Rat>())); // orientation-reversed image
}

TEST_CASE("openness: small perturbation stays positive") {
    FormR phi = to_real(standard_phi0<Rat>());
    FormR pert = dx<double>({1, 2, 4});
    pert *= 0.01;
    CHECK(is_positive(phi + pert));
}

TEST_CASE("exact metric needs a rational ninth root") {
    // 2 phi0 has scale factor 2^{2/3}, irrational in the exact domain
    CHECK_THROWS_AS(metric_from_three_form(Rat(2) * standard_phi0<Rat>()), ExactMetricError);
}

TEST_CASE("hodge star against the euclidean oracle") {
    MetricQ id = euclidean_metric<Rat>();
    std::mt19937_64 rng(77);
    for (int deg = 0; deg <= 7; ++deg) {
        FormQ a = random_form(rng, deg);
        CHECK(hodge_star(id, a) == star_euclidean_oracle(a));
    }
    // the stated dual of phi0
    FormQ star = hodge_star(id, standard_phi0<Rat>());
    FormQ expect(4);
    expect.set(0b1111000, Rat(1));  // 4567
    expect.set(0b1100110, Rat(1));  // 2367
    expect.set(0b0011110, Rat(1));  // 2345
    expect.set(0b1010101, Rat(1));  // 1357
    expect.set(0b0101101, Rat(-1)); // 1346
    expect.set(0b0110011, Rat(-1)); // 1256
    expect.set(0b1001011, Rat(-1)); // 1247
    CHECK(star == expect);
    CHECK(hodge_star(id, dx<Rat>({1})) == dx<Rat>({2, 3, 4, 5, 6, 7}));
    // *1 = vol
    FormQ one(0);
    one.c[0] = Rat(1);
    CHECK(hodge_star(id, one) == dx<Rat>({1, 2, 3, 4, 5, 6, 7}));
}

TEST_CASE("star squared is the identity on all degrees") {
    std::mt19937_64 rng(7);
    // identity metric and a reconstructed non-trivial metric
    std::vector<MetricQ> metrics;
    metrics.push_back(euclidean_metric<Rat>());
    Mat7<Rat> A = mat7_identity<Rat>();
    at(A, 0, 1) = Rat(1, 2);
    at(A, 2, 3) = Rat(-1);
    at(A, 4, 4) = Rat(2);
    metrics.push_back(metric_from_three_form(pullback(A, standard_phi0<Rat>())));
    for (const auto& m : metrics)
        for (int deg = 0; deg <= 7; ++deg) {
            FormQ a = random_form(rng, deg);
            CHECK(hodge_star(m, hodge_star(m, a)) == a);
        }
}

TEST_CASE("hodge star preserves the coefficient 2-norm for the identity metric") {
    std::mt19937_64 rng(123);
    FormQ a = random_form(rng, 3);
    FormQ s = hodge_star(euclidean_metric<Rat>(), a);
    Rat na(0), ns(0);
    for (const auto& c : a.c) na += c * c;
    for (const auto& c : s.c) ns += c * c;
    CHECK(na == ns);
}

TEST_CASE("pullback functoriality and identity") {
    std::mt19937_64 rng(5);
    FormQ phi0 = standard_phi0<Rat>();
    CHECK(pullback(mat7_identity<Rat>(), phi0) == phi0);
    Mat7<Rat> minus = mat7_zero<Rat>();
    for (int i = 0; i < 7; ++i) at(minus, i, i) = Rat(-1);
    CHECK(pullback(minus, phi0) == -phi0);
    for (int trial = 0; trial < 5; ++trial) {
        Mat7<Rat> A = random_rational_matrix(rng), B = random_rational_matrix(rng);
        FormQ a = random_form(rng, 2);
        CHECK(pullback(mat7_mul(A, B), a) == pullback(B, pullback(A, a)));
    }
}

TEST_CASE("metric transforms as A^T g A under pullback") {
    std::mt19937_64 rng(11);
    FormQ phi0 = standard_phi0<Rat>();
    int tested = 0;
    while (tested < 5) {
        Mat7<Rat> A = random_rational_matrix(rng);
        if (sgn(mat7_det(A)) == 0) continue;
        ++tested;
        MetricQ m = metric_from_three_form(pullback(A, phi0));
        Mat7<Rat> expect = mat7_mul(mat7_transpose(A), A); // g(phi0) = I
        CHECK(m.g == expect);
        Rat vol_expect = abs(mat7_det(A));
        CHECK(m.volume == vol_expect);
    }
}

TEST_CASE("positivity is invariant under invertible coordinate changes") {
    std::mt19937_64 rng(13);
    FormQ phi0 = standard_phi0<Rat>();
    int tested = 0;
    while (tested < 5) {
        Mat7<Rat> A = random_rational_matrix(rng);
        if (sgn(mat7_det(A)) == 0) continue;
        ++tested;
        CHECK(is_positive(pullback(A, phi0)));
    }
}

TEST_CASE("kform json round trip") {
    FormQ phi0 = standard_phi0<Rat>();
    json j = to_json(phi0);
    CHECK(formq_from_json(j) == phi0);

    FormR r(2);
    r.set(0b11, 0.5);
    r.set(0b101, -2.25);
    json jr = to_json(r);
    FormR back = formr_from_json(jr);
    CHECK(back == r);

    CHECK_THROWS(formq_from_json(json{{"degree", 2}, {"coeffs", {{"2,1", "1"}}}}));
    CHECK_THROWS(formq_from_json(json{{"degree", 2}, {"coeffs", {{"1,2", 0.5}}}}));
}
