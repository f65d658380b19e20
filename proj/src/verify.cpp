#include "seepage/verify.hpp"

#include "seepage/errors.hpp"
#include "seepage/fem.hpp"
#include "seepage/mesh.hpp"
#include "seepage/stokes_darcy.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace seep::verify {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double ConvergenceTable::final_rate() const {
    return rows.empty() ? 0.0 : rows.back().rate;
}

std::string ConvergenceTable::format() const {
    std::ostringstream os;
    os << title << "\n";
    os << "       h        err_L2        err_H1      rate\n";
    for (const auto& r : rows) {
        os.precision(6);
        os << std::scientific << r.h << "  " << r.err_l2 << "  " << r.err_h1 << "  ";
        os.precision(3);
        os << std::fixed << r.rate << "\n";
    }
    return os.str();
}

namespace {

void push_rate(ConvergenceTable& table, double h, double el2, double eh1) {
    ConvergenceRow row{h, el2, eh1, 0.0};
    if (!table.rows.empty()) {
        const auto& prev = table.rows.back();
        row.rate = std::log(prev.err_l2 / el2) / std::log(prev.h / h);
    }
    table.rows.push_back(row);
}

} // namespace

ConvergenceTable mms_surface_darcy(int levels, double eps_k_tau) {
    if (levels < 3) throw std::invalid_argument("mms_surface_darcy: levels must be >= 3");
    ConvergenceTable table;
    table.title = "surface Darcy MMS, P(x) = cos(2 pi x)";

    for (int l = 0; l < levels; ++l) {
        const int nx = 16 << l;
        const Mesh mesh = generate_channel_mesh(1.0, 1.0, nx, 1);
        const TraceMesh trace = extract_trace(mesh, tags::porous_layer);
        FieldSelection fields;
        fields.velocity = false;
        fields.pressure = false;
        fields.porous = true;
        const DofMap dm = build_dof_map(mesh, &trace, nullptr, fields);

        const int n = trace.n_vertices();
        // sealed (Neumann) ends leave a constant null space; a scalar
        // multiplier pins the mean
        SparseSystem sys(n + 1);
        assemble_surface_darcy(trace, dm, eps_k_tau, sys);
        for (int s = 0; s < trace.n_segments(); ++s) {
            const auto& seg = trace.segments[static_cast<size_t>(s)];
            for (int a = 0; a < 2; ++a) {
                const int v = a == 0 ? seg.v0 : seg.v1;
                const int d = dm.dof(Field::porous_pressure, v);
                sys.add(n, d, seg.length / 2.0);
                sys.add(d, n, seg.length / 2.0);
                // consistent load f = eps K_tau (2 pi)^2 cos(2 pi x)
                for (const auto& q : Quadrature::segment()) {
                    const double x = (1.0 - q.s) * mesh.vertex(seg.v0).x +
                                     q.s * mesh.vertex(seg.v1).x;
                    const double phi = a == 0 ? 1.0 - q.s : q.s;
                    sys.add_rhs(d, q.w * seg.length * phi * eps_k_tau * two_pi *
                                       two_pi * std::cos(two_pi * x));
                }
            }
        }
        sys.finalize();
        const auto x = solve_linear(sys);

        double el2 = 0.0, eh1 = 0.0;
        for (int s = 0; s < trace.n_segments(); ++s) {
            const auto& seg = trace.segments[static_cast<size_t>(s)];
            const double x0 = mesh.vertex(seg.v0).x, x1 = mesh.vertex(seg.v1).x;
            const double p0 = x[static_cast<size_t>(dm.dof(Field::porous_pressure, seg.v0))];
            const double p1 = x[static_cast<size_t>(dm.dof(Field::porous_pressure, seg.v1))];
            const double dph = (p1 - p0) / seg.length;
            for (const auto& q : Quadrature::segment()) {
                const double xx = (1.0 - q.s) * x0 + q.s * x1;
                const double e = (1.0 - q.s) * p0 + q.s * p1 - std::cos(two_pi * xx);
                const double de = dph + two_pi * std::sin(two_pi * xx);
                el2 += q.w * seg.length * e * e;
                eh1 += q.w * seg.length * de * de;
            }
        }
        push_rate(table, 1.0 / nx, std::sqrt(el2), std::sqrt(eh1));
    }
    return table;
}

namespace {

struct ChannelCase {
    double length = 4.0;
    double height = 1.0;
    double mu = 0.03;
    double pressure_gradient = 1.0; // G
    bool slip_bottom = false;       // porous layer instead of no-slip
};

// analytic profiles, evaluated independently of the solver modules
double exact_ux(const ChannelCase& c, double y) {
    const double G = c.pressure_gradient, H = c.height;
    if (c.slip_bottom) return G * (H * H - y * y) / (2.0 * c.mu);
    return G * y * (H - y) / (2.0 * c.mu);
}

double exact_dux_dy(const ChannelCase& c, double y) {
    const double G = c.pressure_gradient, H = c.height;
    if (c.slip_bottom) return -G * y / c.mu;
    return G * (H - 2.0 * y) / (2.0 * c.mu);
}

void solve_channel_level(const ChannelCase& c, int nx, int ny,
                         ChannelFlowResult& out, ConvergenceTable& table) {
    TagScheme scheme;
    scheme.bottom = c.slip_bottom ? tags::porous_layer : tags::rigid_wall;
    scheme.top = tags::rigid_wall;
    const Mesh mesh = generate_channel_mesh(c.length, c.height, nx, ny, scheme);

    PhysParams params;
    params.mu = c.mu;
    params.delta_stab = 0.1;
    params.neumann_loads = {{tags::neumann_left, c.pressure_gradient * c.length},
                            {tags::neumann_right, 0.0}};
    if (c.slip_bottom) {
        params.epsilon = 0.01;
        params.k_n = 1e-8; // impermeable limit
        params.k_tau = 0.0;
    }

    FieldSelection fields;
    fields.porous = c.slip_bottom;
    TraceMesh trace;
    if (c.slip_bottom) trace = extract_trace(mesh, tags::porous_layer);
    const DofMap dm =
        build_dof_map(mesh, c.slip_bottom ? &trace : nullptr, nullptr, fields);

    SparseSystem sys(dm.total);
    assemble_stokes_block(mesh, dm, params, 0.0, nullptr, sys);
    if (c.slip_bottom) {
        assemble_surface_darcy(trace, dm, params.eps_k_tau(), sys);
        assemble_interface_coupling(trace, dm, params, sys);
    }
    apply_fluid_dirichlet(mesh, dm, params, sys);
    if (c.slip_bottom) pin_redundant_porous_dofs(trace, dm, params, sys);
    sys.finalize();
    const auto x = solve_linear(sys);

    auto ux_at = [&](int v) {
        return x[static_cast<size_t>(dm.dof(Field::vel_x, v))];
    };
    auto uy_at = [&](int v) {
        return x[static_cast<size_t>(dm.dof(Field::vel_y, v))];
    };

    // velocity L2 / H1 errors against the analytic profile
    double el2 = 0.0, eh1 = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<size_t>(t)];
        const Vec2 pa = mesh.vertex(tri[0]), pb = mesh.vertex(tri[1]),
                   pc = mesh.vertex(tri[2]);
        const double twoA = (pb.x - pa.x) * (pc.y - pa.y) - (pc.x - pa.x) * (pb.y - pa.y);
        const std::array<Vec2, 3> grad{
            Vec2{(pb.y - pc.y) / twoA, (pc.x - pb.x) / twoA},
            Vec2{(pc.y - pa.y) / twoA, (pa.x - pc.x) / twoA},
            Vec2{(pa.y - pb.y) / twoA, (pb.x - pa.x) / twoA}};
        double gxy = 0.0, gyy[2] = {0.0, 0.0};
        for (int k = 0; k < 3; ++k) {
            gxy += ux_at(tri[static_cast<size_t>(k)]) * grad[static_cast<size_t>(k)].x;
            gyy[0] += ux_at(tri[static_cast<size_t>(k)]) * grad[static_cast<size_t>(k)].y;
            gyy[1] += uy_at(tri[static_cast<size_t>(k)]) * grad[static_cast<size_t>(k)].y;
        }
        for (const auto& q : Quadrature::triangle()) {
            const Vec2 p{pa.x + q.x * (pb.x - pa.x) + q.y * (pc.x - pa.x),
                         pa.y + q.x * (pb.y - pa.y) + q.y * (pc.y - pa.y)};
            const std::array<double, 3> phi{1.0 - q.x - q.y, q.x, q.y};
            double uhx = 0.0, uhy = 0.0;
            for (int k = 0; k < 3; ++k) {
                uhx += phi[static_cast<size_t>(k)] * ux_at(tri[static_cast<size_t>(k)]);
                uhy += phi[static_cast<size_t>(k)] * uy_at(tri[static_cast<size_t>(k)]);
            }
            const double ex = uhx - exact_ux(c, p.y);
            const double ey = uhy;
            el2 += q.w * twoA * (ex * ex + ey * ey);
            const double gy_err = gyy[0] - exact_dux_dy(c, p.y);
            eh1 += q.w * twoA * (gxy * gxy + gy_err * gy_err + gyy[1] * gyy[1]);
        }
    }
    push_rate(table, c.height / ny, std::sqrt(el2), std::sqrt(eh1));

    // probes on the finest level so far (overwritten each level)
    const int nvx = nx + 1;
    const int mid_i = nx / 2;
    const int probe_j = c.slip_bottom ? 0 : ny / 2;
    out.probe_velocity = ux_at(probe_j * nvx + mid_i);
    out.probe_velocity_exact =
        exact_ux(c, c.slip_bottom ? 0.0 : c.height * probe_j / ny);

    out.flux = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double dy = c.height / ny;
        out.flux += 0.5 * dy * (ux_at(j * nvx + mid_i) + ux_at((j + 1) * nvx + mid_i));
    }
    const double G = c.pressure_gradient, H = c.height;
    out.flux_exact = c.slip_bottom ? G * H * H * H / (3.0 * c.mu)
                                   : G * H * H * H / (12.0 * c.mu);

    out.un_l1 = 0.0;
    out.tangential_traction = 0.0;
    if (c.slip_bottom) {
        for (const auto& seg : trace.segments) {
            const double un0 = seg.normal.x * ux_at(seg.v0) + seg.normal.y * uy_at(seg.v0);
            const double un1 = seg.normal.x * ux_at(seg.v1) + seg.normal.y * uy_at(seg.v1);
            for (const auto& q : Quadrature::segment())
                out.un_l1 += q.w * seg.length *
                             std::abs((1.0 - q.s) * un0 + q.s * un1);
        }
        // weak tangential traction = residual of the solved tangential rows
        const auto res = sys.residual(x);
        for (const auto& seg : trace.segments)
            for (int v : {seg.v0, seg.v1})
                out.tangential_traction +=
                    std::abs(res[static_cast<size_t>(dm.dof(Field::vel_x, v))]) / 2.0;
    }
}

ChannelFlowResult run_channel(const ChannelCase& c, int levels) {
    if (levels < 1) throw std::invalid_argument("channel check: levels must be >= 1");
    ChannelFlowResult out;
    out.table.title = c.slip_bottom ? "slip channel (impermeable sealed layer)"
                                    : "Poiseuille channel (no-slip walls)";
    for (int l = 0; l < levels; ++l)
        solve_channel_level(c, 32 << l, 8 << l, out, out.table);
    return out;
}

} // namespace

ChannelFlowResult poiseuille_check(int levels) {
    ChannelCase c;
    return run_channel(c, levels);
}

ChannelFlowResult slip_channel_check(int levels) {
    ChannelCase c;
    c.slip_bottom = true;
    return run_channel(c, levels);
}

} // namespace seep::verify
