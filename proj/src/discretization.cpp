#include "tslice/discretization.hpp"

namespace tslice {

namespace {

// Appends the transverse difference stencil at `node` along `axis`, scaled by `scale`.
void add_transverse(Face& f, const DomainMask& mask, std::size_t node, int axis, double scale) {
    const Grid& g = mask.grid;
    const auto up = g.neighbor(node, axis, +1);
    const auto dn = g.neighbor(node, axis, -1);
    const bool has_up = up && mask.in_mask(*up);
    const bool has_dn = dn && mask.in_mask(*dn);
    const double h = g.spacing[axis];
    auto push = [&](std::size_t n, double w) {
        f.trans_node[static_cast<std::size_t>(f.n_trans)] = n;
        f.trans_weight[static_cast<std::size_t>(f.n_trans)] = w;
        ++f.n_trans;
    };
    if (has_up && has_dn) {
        push(*up, scale / (2.0 * h));
        push(*dn, -scale / (2.0 * h));
    } else if (has_up) {
        push(*up, scale / h);
        push(node, -scale / h);
    } else if (has_dn) {
        push(node, scale / h);
        push(*dn, -scale / h);
    }
}

bool has_transverse(const DomainMask& mask, std::size_t node, int axis) {
    const Grid& g = mask.grid;
    const auto up = g.neighbor(node, axis, +1);
    const auto dn = g.neighbor(node, axis, -1);
    return (up && mask.in_mask(*up)) || (dn && mask.in_mask(*dn));
}

} // namespace

FaceSet FaceSet::build(const DomainMask& mask) {
    FaceSet set;
    const Grid& g = mask.grid;
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        if (!mask.in_mask(n)) continue;
        for (int a = 0; a < g.dim; ++a) {
            const auto m = g.neighbor(n, a, +1);
            if (!m || !mask.in_mask(*m)) continue;
            if (!mask.is_active(n) && !mask.is_active(*m)) continue;
            Face f;
            f.lo = n;
            f.hi = *m;
            f.axis = a;
            const Point pl = g.position(n);
            const Point ph = g.position(*m);
            f.mid = {0.5 * (pl[0] + ph[0]), 0.5 * (pl[1] + ph[1])};
            if (g.dim == 2) {
                const int t = 1 - a;
                const bool lo_ok = has_transverse(mask, n, t);
                const bool hi_ok = has_transverse(mask, *m, t);
                const double w = (lo_ok && hi_ok) ? 0.5 : 1.0;
                if (lo_ok) add_transverse(f, mask, n, t, w);
                if (hi_ok) add_transverse(f, mask, *m, t, w);
            }
            set.faces.push_back(f);
        }
    }
    return set;
}

Vec2 FaceSet::gradient(const Face& f, const Grid& grid, std::span<const double> u) {
    Vec2 xi{0.0, 0.0};
    xi[static_cast<std::size_t>(f.axis)] = (u[f.hi] - u[f.lo]) / grid.spacing[f.axis];
    if (grid.dim == 2) {
        double tr = 0.0;
        for (int k = 0; k < f.n_trans; ++k)
            tr += f.trans_weight[static_cast<std::size_t>(k)] * u[f.trans_node[static_cast<std::size_t>(k)]];
        xi[static_cast<std::size_t>(1 - f.axis)] = tr;
    }
    return xi;
}

} // namespace tslice
