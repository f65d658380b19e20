#include "seepage/errors.hpp"
#include "seepage/fem.hpp"
#include "seepage/mesh.hpp"
#include "seepage/params.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace seep;

namespace {

double tri_monomial_exact(int a, int b) {
    // integral of x^a y^b over the reference triangle = a! b! / (a+b+2)!
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
}

std::vector<std::vector<double>> dense(const SparseSystem& sys) {
    std::vector<std::vector<double>> A(
        static_cast<size_t>(sys.size()),
        std::vector<double>(static_cast<size_t>(sys.size()), 0.0));
    const auto& rp = sys.row_offsets();
    for (int r = 0; r < sys.size(); ++r)
        for (int k = rp[static_cast<size_t>(r)]; k < rp[static_cast<size_t>(r) + 1]; ++k)
            A[static_cast<size_t>(r)][static_cast<size_t>(sys.cols()[static_cast<size_t>(k)])] =
                sys.values()[static_cast<size_t>(k)];
    return A;
}

} // namespace

TEST_SUITE("fem") {

TEST_CASE("quadrature exactness") {
    double wsum = 0.0;
    for (const auto& q : Quadrature::triangle()) {
        CHECK(q.w > 0.0);
        wsum += q.w;
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b) {
            double num = 0.0;
            for (const auto& q : Quadrature::triangle())
                num += q.w * std::pow(q.x, a) * std::pow(q.y, b);
            CHECK(num == doctest::Approx(tri_monomial_exact(a, b)).epsilon(1e-13));
        }
    // segment: degree 5 on [0,1]
    for (int a = 0; a <= 5; ++a) {
        double num = 0.0;
        for (const auto& q : Quadrature::segment()) num += q.w * std::pow(q.s, a);
        CHECK(num == doctest::Approx(1.0 / (a + 1)).epsilon(1e-14));
    }
}

TEST_CASE("dof counting on the 8x2 channel") {
    const Mesh m = generate_channel_mesh(4.0, 1.0, 8, 2);
    const TraceMesh trace = extract_trace(m, tags::porous_layer);
    FieldSelection fields;
    fields.porous = true;
    const DofMap dm = build_dof_map(m, &trace, nullptr, fields);
    CHECK(dm.total == 27 * 3 + 9);
    CHECK(dm.count(Field::vel_x) == 27);
    CHECK(dm.count(Field::porous_pressure) == 9);

    FieldSelection stokes_only;
    const DofMap dm2 = build_dof_map(m, nullptr, nullptr, stokes_only);
    CHECK(dm2.count(Field::porous_pressure) == 0);
    CHECK(dm2.total == 27 * 3);
}

TEST_CASE("P_l dofs cover sealed-span vertices") {
    const Mesh m = generate_two_reservoir_mesh(ReservoirGeometry{});
    const TraceMesh trace = extract_trace(m, tags::porous_layer);
    FieldSelection fields;
    fields.porous = true;
    const DofMap dm = build_dof_map(m, &trace, nullptr, fields);
    CHECK(dm.count(Field::porous_pressure) == trace.n_vertices());
    // fluid dofs exist only on triangle-referenced vertices
    for (int v = 0; v < m.n_vertices(); ++v)
        CHECK((dm.dof(Field::vel_x, v) >= 0) == m.vertex_in_fluid(v));
}

TEST_CASE("dof range is contiguous and disjoint") {
    const Mesh m = generate_channel_mesh(2.0, 1.0, 4, 2);
    const TraceMesh trace = extract_trace(m, tags::porous_layer);
    const TraceMesh wall = extract_trace(m, tags::elastic_wall);
    FieldSelection fields;
    fields.porous = true;
    fields.wall = true;
    const DofMap dm = build_dof_map(m, &trace, &wall, fields);
    std::vector<int> seen(static_cast<size_t>(dm.total), 0);
    for (int f = 0; f < n_fields; ++f)
        for (int v = 0; v < m.n_vertices(); ++v) {
            const int d = dm.dof(static_cast<Field>(f), v);
            if (d >= 0) seen[static_cast<size_t>(d)]++;
        }
    for (int d = 0; d < dm.total; ++d) CHECK(seen[static_cast<size_t>(d)] == 1);
}

TEST_CASE("viscous element kernel: SPD with translational null space") {
    Mesh m;
    m.vertices = {{0, 0}, {1, 0}, {0, 1}};
    m.triangles = {{0, 1, 2}};
    m.boundary_edges = {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}};
    const DofMap dm = build_dof_map(m, nullptr, nullptr, FieldSelection{});
    PhysParams params;
    params.mu = 1.0;
    params.delta_stab = 0.0;
    params.neumann_loads.clear();
    SparseSystem sys(dm.total);
    assemble_stokes_block(m, dm, params, 0.0, nullptr, sys);
    sys.finalize();
    auto A = dense(sys);
    // velocity-velocity block (the viscous kernel) is symmetric
    const int nv = dm.offset(Field::pressure);
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j)
            CHECK(A[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
                  doctest::Approx(A[static_cast<size_t>(j)][static_cast<size_t>(i)])
                      .epsilon(1e-14));
    // translations in x and y are in its null space (zero pressure: the
    // divergence of a constant field vanishes too)
    for (int dir = 0; dir < 2; ++dir) {
        std::vector<double> c(A.size(), 0.0);
        for (int v = 0; v < 3; ++v)
            c[static_cast<size_t>(dm.dof(dir == 0 ? Field::vel_x : Field::vel_y, v))] = 1.0;
        const auto r = sys.matvec(c);
        for (double ri : r) CHECK(std::abs(ri) < 1e-14);
    }
    // positive semidefinite on velocity-only vectors
    std::vector<double> x(A.size(), 0.0);
    for (int i = 0; i < nv; ++i)
        x[static_cast<size_t>(i)] = std::sin(3.7 * i + 0.3);
    const auto Ax = sys.matvec(x);
    double xAx = 0.0;
    for (int i = 0; i < nv; ++i) xAx += x[static_cast<size_t>(i)] * Ax[static_cast<size_t>(i)];
    CHECK(xAx >= -1e-13);
}

TEST_CASE("constant velocity annihilates viscous and divergence residuals") {
    const Mesh m = generate_channel_mesh(1.0, 1.0, 3, 3);
    const DofMap dm = build_dof_map(m, nullptr, nullptr, FieldSelection{});
    PhysParams params;
    params.delta_stab = 0.0; // isolate the viscous/divergence blocks
    SparseSystem sys(dm.total);
    assemble_stokes_block(m, dm, params, 0.0, nullptr, sys);
    sys.finalize();
    std::vector<double> x(static_cast<size_t>(dm.total), 0.0);
    for (int v = 0; v < m.n_vertices(); ++v) {
        x[static_cast<size_t>(dm.dof(Field::vel_x, v))] = 2.5;
        x[static_cast<size_t>(dm.dof(Field::vel_y, v))] = -1.5;
    }
    for (double ri : sys.matvec(x)) CHECK(std::abs(ri) < 1e-12);
}

TEST_CASE("saddle structure: B and -B^T exactly") {
    const Mesh m = generate_channel_mesh(1.0, 1.0, 2, 2);
    const DofMap dm = build_dof_map(m, nullptr, nullptr, FieldSelection{});
    PhysParams params;
    SparseSystem sys(dm.total);
    assemble_stokes_block(m, dm, params, 0.0, nullptr, sys);
    sys.finalize();
    auto A = dense(sys);
    const int p0 = dm.offset(Field::pressure);
    for (int v = 0; v < dm.count(Field::pressure); ++v)
        for (int u = 0; u < p0; ++u)
            CHECK(A[static_cast<size_t>(p0 + v)][static_cast<size_t>(u)] ==
                  -A[static_cast<size_t>(u)][static_cast<size_t>(p0 + v)]);
}

TEST_CASE("Poiseuille interpolant residual decays under refinement") {
    // interpolate the analytic profile, measure the discrete residual of the
    // stationary momentum rows at interior velocity dofs
    const double mu = 0.03, G = 1.0, H = 1.0, L = 1.0;
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
        const int n = 8 << level;
        const Mesh m = generate_channel_mesh(L, H, n, n);
        const DofMap dm = build_dof_map(m, nullptr, nullptr, FieldSelection{});
        PhysParams params;
        params.mu = mu;
        params.delta_stab = 0.0;
        SparseSystem sys(dm.total);
        assemble_stokes_block(m, dm, params, 0.0, nullptr, sys);
        sys.finalize();
        std::vector<double> x(static_cast<size_t>(dm.total), 0.0);
        for (int v = 0; v < m.n_vertices(); ++v) {
            const double y = m.vertex(v).y;
            x[static_cast<size_t>(dm.dof(Field::vel_x, v))] = G * y * (H - y) / (2.0 * mu);
            x[static_cast<size_t>(dm.dof(Field::pressure, v))] = G * (L - m.vertex(v).x);
        }
        const auto r = sys.residual(x);
        double rnorm = 0.0;
        for (int v = 0; v < m.n_vertices(); ++v) {
            const Vec2 pt = m.vertex(v);
            const bool interior = pt.x > 1e-12 && pt.x < L - 1e-12 && pt.y > 1e-12 &&
                                  pt.y < H - 1e-12;
            if (!interior) continue;
            const double rx = r[static_cast<size_t>(dm.dof(Field::vel_x, v))];
            const double ry = r[static_cast<size_t>(dm.dof(Field::vel_y, v))];
            rnorm += rx * rx + ry * ry;
        }
        rnorm = std::sqrt(rnorm);
        // on the uniform grid the interpolant is an exact discrete solution,
        // so the residual sits at rounding level (a fortiori rate >= 1)
        CHECK(rnorm <= std::max(prev / 1.9, 1e-10));
        prev = rnorm;
    }
}

TEST_CASE("surface Darcy element matrix") {
    Mesh m = generate_channel_mesh(1.0, 1.0, 1, 1);
    const TraceMesh trace = extract_trace(m, tags::porous_layer); // one segment, h=1
    FieldSelection fields;
    fields.velocity = false;
    fields.pressure = false;
    fields.porous = true;
    const DofMap dm = build_dof_map(m, &trace, nullptr, fields);
    SparseSystem sys(dm.total);
    const double ekt = 0.25;
    assemble_surface_darcy(trace, dm, ekt, sys);
    sys.finalize();
    auto A = dense(sys);
    CHECK(A[0][0] == doctest::Approx(ekt).epsilon(1e-14));
    CHECK(A[0][1] == doctest::Approx(-ekt).epsilon(1e-14));
    CHECK(A[1][0] == doctest::Approx(-ekt).epsilon(1e-14));
    CHECK(A[1][1] == doctest::Approx(ekt).epsilon(1e-14));
}

TEST_CASE("surface Darcy null space and linear exactness") {
    const Mesh m = generate_channel_mesh(2.0, 1.0, 2, 1);
    const TraceMesh trace = extract_trace(m, tags::porous_layer);
    FieldSelection fields;
    fields.velocity = false;
    fields.pressure = false;
    fields.porous = true;
    const DofMap dm = build_dof_map(m, &trace, nullptr, fields);
    SparseSystem sys(dm.total);
    assemble_surface_darcy(trace, dm, 0.01, sys);
    sys.finalize();
    std::vector<double> c(static_cast<size_t>(dm.total), 3.0);
    for (double ri : sys.matvec(c)) CHECK(std::abs(ri) < 1e-14);
    // linear-in-arc-length field: interior row residual zero
    std::vector<double> lin(static_cast<size_t>(dm.total));
    for (int i = 0; i < trace.n_vertices(); ++i)
        lin[static_cast<size_t>(dm.dof(Field::porous_pressure,
                                       trace.vertex_ids[static_cast<size_t>(i)]))] =
            trace.arc_coords[static_cast<size_t>(i)];
    const auto r = sys.matvec(lin);
    const int mid = dm.dof(Field::porous_pressure, trace.vertex_ids[1]);
    CHECK(std::abs(r[static_cast<size_t>(mid)]) < 1e-14);
}

TEST_CASE("interface coupling: transpose identity and penalty integral") {
    const Mesh m = generate_channel_mesh(2.0, 1.0, 4, 2);
    const TraceMesh trace = extract_trace(m, tags::porous_layer);
    FieldSelection fields;
    fields.porous = true;
    const DofMap dm = build_dof_map(m, &trace, nullptr, fields);
    PhysParams params;
    params.epsilon = 0.01;
    params.k_n = 1.0;
    SparseSystem sys(dm.total);
    assemble_interface_coupling(trace, dm, params, sys);
    sys.finalize();
    auto A = dense(sys);
    const int p0 = dm.offset(Field::porous_pressure);
    for (int i = 0; i < dm.total; ++i)
        for (int j = p0; j < p0 + dm.count(Field::porous_pressure); ++j)
            CHECK(A[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
                  doctest::Approx(-A[static_cast<size_t>(j)][static_cast<size_t>(i)])
                      .epsilon(1e-14));

    // u.n == 1 (i.e. u_y = -1 on the bottom, n = (0,-1)): penalty row sum
    std::vector<double> un(static_cast<size_t>(dm.total), 0.0);
    for (int i = 0; i < trace.n_vertices(); ++i)
        un[static_cast<size_t>(dm.dof(Field::vel_y, trace.vertex_ids[static_cast<size_t>(i)]))] =
            -1.0;
    const auto r = sys.matvec(un);
    double total = 0.0;
    for (int i = 0; i < trace.n_vertices(); ++i) {
        const int d = dm.dof(Field::vel_y, trace.vertex_ids[static_cast<size_t>(i)]);
        total += -r[static_cast<size_t>(d)]; // v.n = -v_y on the bottom
    }
    CHECK(total == doctest::Approx(params.interface_penalty() * trace.total_length())
                       .epsilon(1e-13));
}

TEST_CASE("interface coupling skips sealed spans") {
    const Mesh m = generate_two_reservoir_mesh(ReservoirGeometry{});
    const TraceMesh trace = extract_trace(m, tags::porous_layer);
    FieldSelection fields;
    fields.porous = true;
    const DofMap dm = build_dof_map(m, &trace, nullptr, fields);
    PhysParams params;
    SparseSystem sys(dm.total);
    assemble_interface_coupling(trace, dm, params, sys);
    sys.finalize();
    // P_l rows of sealed-interior vertices are identically zero
    for (int i = 0; i < trace.n_vertices(); ++i) {
        const int v = trace.vertex_ids[static_cast<size_t>(i)];
        if (m.vertex_in_fluid(v)) continue;
        const int d = dm.dof(Field::porous_pressure, v);
        const auto& rp = sys.row_offsets();
        for (int k = rp[static_cast<size_t>(d)]; k < rp[static_cast<size_t>(d) + 1]; ++k)
            CHECK(sys.values()[static_cast<size_t>(k)] == 0.0);
    }
}

TEST_CASE("solve_linear basics") {
    SparseSystem id(3);
    for (int i = 0; i < 3; ++i) id.add(i, i, 1.0);
    id.add_rhs(0, 4.0);
    id.add_rhs(1, -2.0);
    id.add_rhs(2, 0.5);
    id.finalize();
    const auto x = solve_linear(id);
    CHECK(x[0] == doctest::Approx(4.0));
    CHECK(x[1] == doctest::Approx(-2.0));
    CHECK(x[2] == doctest::Approx(0.5));
}

TEST_CASE("solve_linear: 1D Laplacian hand oracle") {
    // -u'' = 1 on (0,1), u(0)=u(1)=0, h=1/4, 3 interior dofs
    // tridiagonal (1/h)[2,-1;...] with rhs h -> u_mid = 1/8 exactly at nodes
    SparseSystem sys(3);
    const double h = 0.25;
    for (int i = 0; i < 3; ++i) {
        sys.add(i, i, 2.0 / h);
        if (i > 0) sys.add(i, i - 1, -1.0 / h);
        if (i < 2) sys.add(i, i + 1, -1.0 / h);
        sys.add_rhs(i, h);
    }
    sys.finalize();
    const auto x = solve_linear(sys);
    // exact nodal values of u(x) = x(1-x)/2
    CHECK(x[0] == doctest::Approx(0.25 * 0.75 / 2).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(0.5 * 0.5 / 2).epsilon(1e-12));
    CHECK(x[2] == doctest::Approx(0.75 * 0.25 / 2).epsilon(1e-12));
}

TEST_CASE("solve_linear rejects singular systems") {
    SparseSystem zero(2);
    zero.add(0, 0, 0.0);
    zero.add(1, 1, 0.0);
    zero.finalize();
    CHECK_THROWS_AS(solve_linear(zero), SingularSystemError);
}

TEST_CASE("unstabilized equal-order Stokes is reported singular") {
    // without stabilization the pressure block has spurious modes; the
    // solver must diagnose rather than return garbage
    const Mesh m = generate_channel_mesh(1.0, 1.0, 2, 2);
    const DofMap dm = build_dof_map(m, nullptr, nullptr, FieldSelection{});
    PhysParams params;
    params.delta_stab = 0.0;
    SparseSystem sys(dm.total);
    assemble_stokes_block(m, dm, params, 0.0, nullptr, sys);
    for (int v = 0; v < m.n_vertices(); ++v) {
        const Vec2 p = m.vertex(v);
        const bool bnd = p.x < 1e-12 || p.x > 1 - 1e-12 || p.y < 1e-12 || p.y > 1 - 1e-12;
        if (bnd) {
            sys.set_dirichlet(dm.dof(Field::vel_x, v), 0.0);
            sys.set_dirichlet(dm.dof(Field::vel_y, v), 0.0);
        }
    }
    sys.finalize();
    CHECK_THROWS_AS(solve_linear(sys), SingularSystemError);
}

TEST_CASE("assembly determinism") {
    const Mesh m = generate_channel_mesh(2.0, 1.0, 6, 3);
    const TraceMesh trace = extract_trace(m, tags::porous_layer);
    FieldSelection fields;
    fields.porous = true;
    const DofMap dm = build_dof_map(m, &trace, nullptr, fields);
    PhysParams params;
    auto build = [&] {
        SparseSystem sys(dm.total);
        assemble_stokes_block(m, dm, params, 0.1, nullptr, sys);
        assemble_surface_darcy(trace, dm, params.eps_k_tau(), sys);
        assemble_interface_coupling(trace, dm, params, sys);
        sys.finalize();
        return sys;
    };
    const auto a = build();
    const auto b = build();
    REQUIRE(a.values().size() == b.values().size());
    for (size_t i = 0; i < a.values().size(); ++i)
        CHECK(a.values()[i] == b.values()[i]); // bit-identical
    CHECK(a.symmetric_pattern());
}

} // TEST_SUITE
