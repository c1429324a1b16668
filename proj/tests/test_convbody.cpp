#include <doctest.h>

#include <spectradual/convbody.hpp>

#include <random>

using namespace spectradual;

namespace {

// Radial function of conv(V) in direction u, from the angle-sorted boundary.
double radial(const Mat& V, const Vec& u) {
    std::vector<Vec> pts;
    for (long i = 0; i < V.rows(); ++i) pts.push_back(V.row(i).transpose());
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return std::atan2(a(1), a(0)) < std::atan2(b(1), b(0)); });
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Vec a = pts[i], b = pts[(i + 1) % pts.size()];
        Mat M(2, 2);
        M << u(0), a(0) - b(0), u(1), a(1) - b(1);
        if (std::abs(M.determinant()) < 1e-14) continue;
        Vec ts = M.colPivHouseholderQr().solve(a);  // t u = a + s (b − a)
        if (ts(0) > 0 && ts(1) >= -1e-12 && ts(1) <= 1 + 1e-12) best = std::max(best, ts(0));
    }
    return best;
}

// Smallest r with L/r ⊆ K ⊆ rL; the ratio of radial functions peaks at a vertex direction.
double hat_oracle(const SymPolytope& K, const SymPolytope& L) {
    double r = 1.0;
    for (const Mat* V : {&K.vertices(), &L.vertices()})
        for (long i = 0; i < V->rows(); ++i) {
            Vec u = V->row(i).transpose().normalized();
            double a = radial(K.vertices(), u), b = radial(L.vertices(), u);
            r = std::max({r, a / b, b / a});
        }
    return r;
}

bool same_rows(const Mat& A, const Mat& B, double tol) {
    if (A.rows() != B.rows()) return false;
    for (long i = 0; i < A.rows(); ++i) {
        bool hit = false;
        for (long j = 0; j < B.rows() && !hit; ++j) hit = (A.row(i) - B.row(j)).cwiseAbs().maxCoeff() <= tol;
        if (!hit) return false;
    }
    return true;
}

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

}  // namespace

TEST_CASE("square and diamond") {
    SymPolytope K = square(), L = diamond();
    CHECK(K.vertices().rows() == 4);
    CHECK(gauge(K).eval(v2(0.5, -2)) == doctest::Approx(2.0));
    CHECK(support(K).eval(v2(0.5, -2)) == doctest::Approx(2.5));
    CHECK(gauge(L).eval(v2(0.5, -2)) == doctest::Approx(2.5));
    CHECK(same_rows(polar(K).vertices(), L.vertices(), 1e-12));
    auto ex = st_extremes(K, L);
    CHECK(ex.lambda_min == doctest::Approx(0.5));
    CHECK(ex.lambda_max == doctest::Approx(1.0));
    CHECK(hat_distance(K, L) == doctest::Approx(2.0));
    CHECK(hat_distance(polar(K), polar(L)) == doctest::Approx(2.0));
}

TEST_CASE("tangency at the extremes") {
    SymPolytope K = square(), L = diamond();
    CHECK(tangency_verify(K, L, 1.0).certificate.feasible);
    CHECK(tangency_verify(K, L, 0.5).certificate.feasible);
    CHECK_FALSE(tangency_verify(K, L, 0.75).certificate.feasible);
    CHECK_THROWS_AS(tangency_verify(K, L, -1.0), DomainError);
}

TEST_CASE("dilation distance") {
    SymPolytope K = square();
    CHECK(hat_distance(K, dilate(K, 3.0)) == doctest::Approx(3.0));
    CHECK(hat_distance(K, K) == doctest::Approx(1.0));
}

TEST_CASE("construction errors") {
    Mat seg(1, 2);
    seg << 1, 0;
    CHECK_THROWS_AS(SymPolytope::from_points(seg), DomainError);
    Mat tri(3, 2);
    tri << 1, 0, -1, 1, -1, -1;
    SymPolytope T = SymPolytope::from_points(tri, false);
    CHECK_FALSE(T.symmetric());
    CHECK_THROWS_AS(gauge(T), DomainError);
    CHECK_THROWS_AS(linear_image(square(), Mat::Zero(2, 2)), DomainError);
    CHECK_THROWS_AS(dilate(square(), 0.0), DomainError);
}

TEST_CASE("random polygon pairs") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 30; ++t) {
        SymPolytope K = random_polygon(rng), L = random_polygon(rng);
        CAPTURE(t);
        double d = hat_distance(K, L);
        CHECK(d == doctest::Approx(hat_oracle(K, L)).epsilon(1e-9));
        CHECK(hat_distance(polar(K), polar(L)) == doctest::Approx(d).epsilon(1e-8));
        CHECK(hat_distance(L, K) == doctest::Approx(d).epsilon(1e-12));
        CHECK(same_rows(polar(polar(K)).vertices(), K.vertices(), 1e-9));
        auto ex = st_extremes(K, L), rx = st_extremes(L, K);
        CHECK(ex.lambda_min * rx.lambda_max == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ex.lambda_min <= ex.lambda_max + 1e-12);
    }
}
