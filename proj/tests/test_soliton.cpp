#include <catch2/catch_amalgamated.hpp>

#include <fnls/soliton.hpp>

#include <cmath>
#include <random>

using namespace fnls;

namespace {

DiscreteSpectrum make_spec(std::initializer_list<std::pair<cplx, cplx>> pts) {
    std::vector<SpectralPoint> v;
    for (auto& [z, c] : pts) v.emplace_back(z, c);
    return DiscreteSpectrum(std::move(v));
}

DiscreteSpectrum random_spectrum(std::mt19937& rng, int nmax = 6) {
    std::uniform_int_distribution<int> nd(1, nmax);
    std::uniform_real_distribution<double> re(-1.5, 1.5), im(0.15, 2.0), mod(0.2, 3.0),
        ph(-3.1, 3.1);
    const int n = nd(rng);
    std::vector<SpectralPoint> pts;
    int guard = 0;
    while (int(pts.size()) < n && guard++ < 200) {
        cplx z{re(rng), im(rng)};
        bool ok = true;
        for (auto& p : pts)
            if (dist_inf(p.z, z) < 0.15) ok = false;
        if (!ok) continue;
        pts.emplace_back(z, std::polar(mod(rng), ph(rng)));
    }
    return DiscreteSpectrum(std::move(pts));
}

} // namespace

TEST_CASE("gamma_factor examples and contract") {
    SpectralPoint p{{0.0, 1.0}, {2.0, 0.0}};
    CHECK(std::abs(gamma_factor(p, 0.0, 0.0) - cplx(2.0, 0.0)) < 1e-15);
    CHECK(std::abs(gamma_factor(p, 1.0, 0.0) - cplx(2.0 * std::exp(-2.0), 0.0)) < 1e-15);
    SpectralPoint q{{1.0, 1.0}, {1.0, 0.0}};
    CHECK(std::abs(gamma_factor(q, 0.0, 1.0) - cplx(std::exp(-4.0), 0.0)) < 1e-15);

    // d/dx log gamma = 2 i z
    const double h = 1e-6;
    const cplx d = (gamma_log(q, 0.3 + h, 0.7) - gamma_log(q, 0.3 - h, 0.7)) / (2.0 * h);
    CHECK(std::abs(d - cplx(0.0, 2.0) * q.z) < 1e-8);

    // overflow guard trips where exp would not be representable
    SpectralPoint far{{0.0, 2.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(gamma_factor(far, -400.0, 0.0), overflow_guard_error);
    CHECK(std::isfinite(gamma_log(far, -400.0, 0.0).real()));
}

TEST_CASE("assemble_standard matches the hand-evaluated N=1 system") {
    auto spec = make_spec({{{0.0, 1.0}, {2.0, 0.0}}});
    auto sys = assemble_standard(spec, 0.0, 0.0);
    REQUIRE(sys.n == 1);
    CHECK(std::abs(sys.matrix(0, 0) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(sys.matrix(0, 1) - cplx(0.0, -1.0)) < 1e-14);
    CHECK(std::abs(sys.matrix(1, 0) - cplx(0.0, -1.0)) < 1e-14);
    CHECK(std::abs(sys.matrix(1, 1) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(sys.rhs[0]) < 1e-14);
    CHECK(std::abs(sys.rhs[1] - std::sqrt(2.0)) < 1e-14);

    auto empty = assemble_standard(DiscreteSpectrum{}, 0.0, 0.0);
    CHECK(empty.n == 0);
}

TEST_CASE("gram matrix is Hermitian positive definite; det(I+AA*) >= 1") {
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> xs(-2.0, 2.0), ts(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        auto spec = random_spectrum(rng);
        auto sys = assemble_standard(spec, xs(rng), ts(rng));
        auto a = sys.gram();
        const int n = a.rows();
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                CHECK(std::abs(a(j, k) - std::conj(a(k, j))) < 1e-12 * (1.0 + std::abs(a(j, k))));
        CHECK(hermitian_min_pivot(a) > 0.0);
        // det(I + A conj(A)) = prod(1 + mu_k) with mu_k > 0
        CMatrix ac(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) ac(j, k) = std::conj(a(j, k));
        auto prod = matmul(a, ac);
        for (int j = 0; j < n; ++j) prod(j, j) += 1.0;
        const cplx det = LU(prod).det();
        CHECK(std::abs(det.imag()) < 1e-8 * std::abs(det));
        CHECK(det.real() >= 1.0 - 1e-10);
    }
}

TEST_CASE("one-soliton solve matches the closed form") {
    auto spec = make_spec({{{0.0, 1.0}, {2.0, 0.0}}});
    auto sol = solve_soliton(spec, 0.0, 0.0, {});
    CHECK(std::abs(reconstruct_psi(sol) - cplx(0.0, -2.0)) < 1e-13);

    // generic eigenvalue, several (x,t)
    const cplx z{0.4, 0.9}, c{0.5, -0.2};
    auto spec2 = make_spec({{z, c}});
    for (double x : {-3.0, 0.0, 1.3}) {
        for (double t : {0.0, 0.7, 2.0}) {
            auto s = solve_soliton(spec2, x, t);
            CHECK(std::abs(reconstruct_psi(s) - one_soliton(z, c, x, t)) < 1e-12);
        }
    }
    // frozen spot value (independent high-precision evaluation)
    CHECK(std::abs(one_soliton(z, c, 1.3, 0.7) -
                   cplx(0.0093849082879264397, -0.0366767920101254759)) < 1e-15);
}

TEST_CASE("empty spectrum gives zero field and identity matrix") {
    DiscreteSpectrum spec;
    auto sol = solve_soliton(spec, 0.5, 0.5, {});
    CHECK(std::abs(reconstruct_psi(sol)) == 0.0);
    auto m = evaluate_matrix(sol, spec, {0.3, 0.8});
    CHECK(std::abs(m(0, 0) - 1.0) == 0.0);
    CHECK(std::abs(m(1, 1) - 1.0) == 0.0);
    CHECK(std::abs(m(0, 1)) == 0.0);
}

TEST_CASE("delta renormalization is consistent: m^D = m a_D^{sigma3}") {
    auto spec = make_spec({{{0.0, 1.0}, {1.0, 0.0}}, {{0.5, 0.5}, {1.0, 0.0}}});
    const double x = 0.3, t = 0.7;
    auto sol0 = solve_soliton(spec, x, t, {});
    auto sol1 = solve_soliton(spec, x, t, {1});
    CHECK(residue_residual(sol0, spec) < 1e-9);
    CHECK(residue_residual(sol1, spec) < 1e-9);
    for (cplx z : {cplx{1.7, 0.4}, cplx{-0.6, -1.1}, cplx{0.2, 2.5}}) {
        auto m0 = evaluate_matrix(sol0, spec, z);
        auto m1 = evaluate_matrix(sol1, spec, z);
        const cplx ad = blaschke_delta(spec, {1}, z);
        CHECK(std::abs(m1(0, 0) - m0(0, 0) * ad) < 1e-11);
        CHECK(std::abs(m1(1, 0) - m0(1, 0) * ad) < 1e-11);
        CHECK(std::abs(m1(0, 1) - m0(0, 1) / ad) < 1e-11);
        CHECK(std::abs(m1(1, 1) - m0(1, 1) / ad) < 1e-11);
    }
}

TEST_CASE("delta = empty coincides with the standard system after unscaling") {
    auto spec = make_spec({{{-0.3, 0.8}, {1.5, 0.5}}, {{0.6, 1.2}, {-0.7, 0.1}}});
    const double x = -0.4, t = 0.25;
    auto sys = assemble_standard(spec, x, t);
    std::vector<cplx> rhs = sys.rhs;
    LU lu(sys.matrix);
    auto u = lu.solve(rhs);
    auto sol = solve_soliton(spec, x, t, {});
    const int n = sys.n;
    for (int k = 0; k < n; ++k) {
        const cplx alpha = sys.gamma_sqrt[size_t(k)] * u[size_t(k)];
        const cplx beta_conj = std::conj(sys.gamma_sqrt[size_t(k)]) * u[size_t(n + k)];
        CHECK(std::abs(alpha - sol.alpha[size_t(k)]) < 1e-11);
        CHECK(std::abs(std::conj(beta_conj) - sol.beta[size_t(k)]) < 1e-11);
    }
}

TEST_CASE("psi is independent of the normalization choice") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> xs(-2.0, 2.0), ts(0.0, 1.5);
    for (int trial = 0; trial < 40; ++trial) {
        auto spec = random_spectrum(rng, 4);
        const double x = xs(rng), t = ts(rng);
        auto base = reconstruct_psi(solve_soliton(spec, x, t, {}));
        // all-subsets for small n, else a few random deltas
        const int n = int(spec.size());
        std::uniform_int_distribution<int> bit(0, (1 << n) - 1);
        for (int trial2 = 0; trial2 < 4; ++trial2) {
            const int mask = bit(rng);
            std::vector<int> delta;
            for (int k = 0; k < n; ++k)
                if (mask & (1 << k)) delta.push_back(k);
            auto psi = reconstruct_psi(solve_soliton(spec, x, t, delta));
            CHECK(std::abs(psi - base) < 1e-9 * (1.0 + std::abs(base)));
        }
    }
}

TEST_CASE("matrix determinant is 1 and decays to identity at 1/z rate") {
    auto spec = make_spec({{{-0.2, 0.9}, {0.3, 1.1}}, {{0.7, 0.4}, {2.0, -0.4}}});
    auto sol = solve_soliton(spec, 0.9, 0.4);
    for (cplx z : {cplx{2.0, 1.0}, cplx{-3.0, 0.5}, cplx{0.0, -2.2}, cplx{10.0, 10.0}}) {
        auto m = evaluate_matrix(sol, spec, z);
        const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        CHECK(std::abs(det - 1.0) < 1e-8);
    }
    // ||m(iR) - I|| * R stays bounded as R doubles
    double prev = 0.0;
    for (double R : {64.0, 128.0, 256.0}) {
        auto m = evaluate_matrix(sol, spec, {0.0, R});
        double dev = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                dev = std::max(dev, std::abs(m(i, j) - (i == j ? 1.0 : 0.0)));
        const double scaled = dev * R;
        if (prev != 0.0) CHECK(scaled < 1.5 * prev);
        prev = scaled;
    }
    CHECK_THROWS_AS(evaluate_matrix(sol, spec, spec[0].z), pole_evaluation_error);
}

TEST_CASE("1/z diagonal coefficient matches the mass quadrature") {
    auto spec = make_spec({{{0.0, 1.0}, {1.0, 0.0}}, {{0.5, 0.5}, {1.0, 0.0}}});
    const double x0 = 0.3, t = 0.7;
    for (std::vector<int> delta : {std::vector<int>{}, std::vector<int>{1}}) {
        auto sol = solve_soliton(spec, x0, t, delta);
        // lim z (m11 - 1) from the partial fractions
        cplx coef = 0.0;
        std::vector<bool> ind(spec.size(), false);
        for (int k : delta) ind[size_t(k)] = true;
        for (size_t k = 0; k < spec.size(); ++k)
            coef += ind[k] ? std::conj(sol.alpha[k]) : sol.alpha[k];
        // quadrature of |psi|^2 over [x0, +inf)
        double mass_tail = 0.0;
        const double dx = 0.01;
        for (double s = x0; s < 40.0; s += dx) {
            auto p1 = std::abs(reconstruct_psi(solve_soliton(spec, s, t)));
            auto p2 = std::abs(reconstruct_psi(solve_soliton(spec, s + dx, t)));
            mass_tail += 0.5 * (p1 * p1 + p2 * p2) * dx;
        }
        double delta_mass = 0.0;
        for (int k : delta) delta_mass += 4.0 * spec[size_t(k)].z.imag();
        const cplx expect = (-mass_tail + delta_mass) / cplx(0.0, 2.0);
        CHECK(std::abs(coef - expect) < 1e-4);
    }
}

TEST_CASE("L2 mass equals 4 sum Im z_k") {
    auto spec = make_spec({{{0.0, 1.0}, {2.0, 0.3}}, {{0.5, 2.0}, {0.4, 0.0}}});
    const double t = 0.2;
    double mass = 0.0;
    const double dx = 0.005, X = 30.0;
    cplx prev = reconstruct_psi(solve_soliton(spec, -X, t));
    for (double s = -X + dx; s <= X; s += dx) {
        const cplx cur = reconstruct_psi(solve_soliton(spec, s, t));
        mass += 0.5 * (std::norm(prev) + std::norm(cur)) * dx;
        prev = cur;
    }
    const double expect = 4.0 * (1.0 + 2.0);
    CHECK(std::abs(mass - expect) < 1e-6 * expect);
}

TEST_CASE("conjugation symmetry of the solution matrix") {
    auto spec = make_spec({{{0.3, 0.7}, {1.0, 2.0}}});
    auto sol = solve_soliton(spec, 0.1, 0.3);
    const cplx z{1.1, 0.6};
    auto m = evaluate_matrix(sol, spec, z);
    auto mc = evaluate_matrix(sol, spec, std::conj(z));
    // m(z) = sigma2 m(z^*)^* sigma2
    CHECK(std::abs(m(0, 0) - std::conj(mc(1, 1))) < 1e-12);
    CHECK(std::abs(m(1, 1) - std::conj(mc(0, 0))) < 1e-12);
    CHECK(std::abs(m(0, 1) + std::conj(mc(1, 0))) < 1e-12);
    CHECK(std::abs(m(1, 0) + std::conj(mc(0, 1))) < 1e-12);
}

TEST_CASE("reduce_to_cone modifies constants by the squared Blaschke product") {
    // all poles inside I: unchanged
    auto spec = make_spec({{{0.0, 1.0}, {2.0, 0.0}}, {{0.4, 0.5}, {1.0, 1.0}}});
    SpaceTimeCone wide{-1.0, 1.0, -2.0, 2.0}; // I = [-1, 1]
    auto red = reduce_to_cone(spec, wide);
    REQUIRE(red.size() == 2);
    for (size_t k = 0; k < 2; ++k) {
        CHECK(std::abs(red[k].z - spec[k].z) == 0.0);
        CHECK(std::abs(red[k].c - spec[k].c) == 0.0);
    }

    // single kept pole at i, discarded pole left of I
    auto spec2 = make_spec({{{0.0, 1.0}, {0.7, 0.4}}, {{-1.0, 1.0}, {1.0, 0.0}}});
    SpaceTimeCone cone{-1.0, 1.0, -0.5, 0.5}; // I = [-0.25, 0.25]
    auto red2 = reduce_to_cone(spec2, cone);
    REQUIRE(red2.size() == 1);
    const cplx factor{-0.12, -0.16}; // ((i-(-1+i))/(i-(-1-i)))^2, frozen
    CHECK(std::abs(red2[0].c - cplx(0.7, 0.4) * factor) < 1e-15);

    // discarded pole right of I contributes no factor
    auto spec3 = make_spec({{{0.0, 1.0}, {0.7, 0.4}}, {{1.5, 1.0}, {1.0, 0.0}}});
    auto red3 = reduce_to_cone(spec3, cone);
    REQUIRE(red3.size() == 1);
    CHECK(std::abs(red3[0].c - cplx(0.7, 0.4)) == 0.0);
}

TEST_CASE("soliton separation decays exponentially along a characteristic") {
    auto spec = make_spec({{{-0.5, 0.6}, {1.0, 0.0}}, {{0.5, 0.8}, {1.0, 0.0}}});
    // track the z_2 = 0.5 + 0.8i soliton: speed -2 Re z = -1
    SpaceTimeCone cone{-1.0, 1.0, -1.0, -1.0};
    auto red = reduce_to_cone(spec, cone);
    REQUIRE(red.size() == 1);
    std::vector<double> ts, logs;
    for (double t = 1.0; t <= 6.0; t += 1.0) {
        const double x = -1.0 * t;
        const cplx full = reconstruct_psi(solve_soliton(spec, x, t));
        const cplx onew = reconstruct_psi(solve_soliton(red, x, t));
        const double diff = std::abs(full - onew);
        REQUIRE(diff > 0.0);
        ts.push_back(t);
        logs.push_back(std::log(diff));
    }
    // least squares slope of log diff vs t; expect about -4 rho(I) = -3.2
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
        sx += ts[i];
        sy += logs[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * logs[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope < -0.9 * 4.0 * 0.6); // rho from the spectral gap constants
}

TEST_CASE("exact solution satisfies NLS to stencil order") {
    auto spec = make_spec({{{0.2, 0.8}, {1.0, -0.5}}});
    const double x = 0.4, t = 0.3;
    auto psi_at = [&](double xx, double tt) {
        return reconstruct_psi(solve_soliton(spec, xx, tt));
    };
    auto residual = [&](double h) {
        const cplx pt = (psi_at(x, t + h) - psi_at(x, t - h)) / (2.0 * h);
        const cplx pxx = (psi_at(x + h, t) - 2.0 * psi_at(x, t) + psi_at(x - h, t)) / (h * h);
        const cplx p = psi_at(x, t);
        return std::abs(cplx(0.0, 1.0) * pt + 0.5 * pxx + std::norm(p) * p);
    };
    const double r1 = residual(1e-2), r2 = residual(5e-3);
    CHECK(r1 / r2 > 3.0); // second order stencil
    CHECK(r2 < 1e-4);
}
