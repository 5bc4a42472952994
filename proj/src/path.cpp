#include "itolab/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace itolab {

CadlagPath::CadlagPath(TimeGrid grid, std::size_t dim)
    : grid_(grid), dim_(dim) {
    if (dim_ == 0) throw invalid_input("CadlagPath: dimension must be positive");
    values_.assign(grid_.node_count() * dim_, 0.0);
    jumps_.assign(grid_.node_count() * dim_, 0.0);
}

CadlagPath CadlagPath::constant(TimeGrid grid, double value, std::size_t dim) {
    CadlagPath p(grid, dim);
    std::fill(p.values_.begin(), p.values_.end(), value);
    return p;
}

bool CadlagPath::has_jump(std::size_t node) const {
    return std::binary_search(jump_nodes_.begin(), jump_nodes_.end(),
                              static_cast<std::uint32_t>(node));
}

void CadlagPath::sync_registry(std::size_t node) {
    bool nonzero = false;
    for (std::size_t c = 0; c < dim_; ++c) {
        if (jumps_[node * dim_ + c] != 0.0) nonzero = true;
    }
    const auto key = static_cast<std::uint32_t>(node);
    auto it = std::lower_bound(jump_nodes_.begin(), jump_nodes_.end(), key);
    const bool present = (it != jump_nodes_.end() && *it == key);
    if (nonzero && !present) {
        jump_nodes_.insert(it, key);
    } else if (!nonzero && present) {
        jump_nodes_.erase(it);
    }
}

void CadlagPath::set_jump(std::size_t node, std::span<const double> size) {
    if (size.size() != dim_) throw invalid_input("set_jump: dimension mismatch");
    if (node == 0) throw invalid_input("set_jump: no jump at node 0 by convention");
    if (node >= nodes()) throw invalid_input("set_jump: node out of range");
    for (std::size_t c = 0; c < dim_; ++c) jumps_[node * dim_ + c] = size[c];
    sync_registry(node);
}

void CadlagPath::set_jump(std::size_t node, double size) {
    set_jump(node, std::span<const double>(&size, 1));
}

void CadlagPath::add_to_jump(std::size_t node, std::span<const double> delta) {
    if (delta.size() != dim_) throw invalid_input("add_to_jump: dimension mismatch");
    if (node == 0) throw invalid_input("add_to_jump: no jump at node 0 by convention");
    for (std::size_t c = 0; c < dim_; ++c) jumps_[node * dim_ + c] += delta[c];
    sync_registry(node);
}

void CadlagPath::clear_jump(std::size_t node) {
    for (std::size_t c = 0; c < dim_; ++c) jumps_[node * dim_ + c] = 0.0;
    sync_registry(node);
}

void CadlagPath::validate() const {
    for (double v : values_) {
        if (!std::isfinite(v)) throw numeric_failure("CadlagPath: non-finite value");
    }
    for (double v : jumps_) {
        if (!std::isfinite(v)) throw numeric_failure("CadlagPath: non-finite jump");
    }
    for (std::size_t k = 0; k < nodes(); ++k) {
        bool nonzero = false;
        for (std::size_t c = 0; c < dim_; ++c) {
            if (jumps_[k * dim_ + c] != 0.0) nonzero = true;
        }
        if (nonzero != has_jump(k)) {
            throw invalid_input("CadlagPath: jump registry out of sync at node " +
                                std::to_string(k));
        }
        if (k == 0 && nonzero) throw invalid_input("CadlagPath: jump at node 0");
    }
}

bool CadlagPath::identical(const CadlagPath& other) const {
    return grid_ == other.grid_ && dim_ == other.dim_ && values_ == other.values_ &&
           jumps_ == other.jumps_;
}

void require_same_grid(const CadlagPath& a, const CadlagPath& b) {
    if (a.grid() != b.grid()) throw invalid_input("paths live on different grids");
    if (a.dim() != b.dim()) throw invalid_input("paths have different dimensions");
}

namespace {

void check_node(const CadlagPath& x, std::size_t t, const char* op) {
    if (t >= x.nodes()) {
        throw invalid_input(std::string(op) + ": node " + std::to_string(t) +
                            " outside grid");
    }
}

}  // namespace

CadlagPath stop(const CadlagPath& x, std::size_t t) {
    check_node(x, t, "stop");
    CadlagPath out(x.grid(), x.dim());
    const std::size_t d = x.dim();
    for (std::size_t k = 0; k < x.nodes(); ++k) {
        const std::size_t src = (k < t) ? k : t;
        for (std::size_t c = 0; c < d; ++c) out.set_value(k, x.value(src, c), c);
    }
    std::vector<double> buf(d);
    for (std::uint32_t node : x.jump_nodes()) {
        if (node > t) break;
        for (std::size_t c = 0; c < d; ++c) buf[c] = x.jump(node, c);
        out.set_jump(node, buf);
    }
    return out;
}

CadlagPath predictable_stop(const CadlagPath& x, std::size_t t) {
    check_node(x, t, "predictable_stop");
    CadlagPath out(x.grid(), x.dim());
    const std::size_t d = x.dim();
    for (std::size_t k = 0; k < x.nodes(); ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            out.set_value(k, (k < t) ? x.value(k, c) : x.left_limit(t, c), c);
        }
    }
    std::vector<double> buf(d);
    for (std::uint32_t node : x.jump_nodes()) {
        if (node >= t) break;
        for (std::size_t c = 0; c < d; ++c) buf[c] = x.jump(node, c);
        out.set_jump(node, buf);
    }
    return out;
}

CadlagPath bump(const CadlagPath& x, std::size_t t, std::span<const double> y) {
    check_node(x, t, "bump");
    if (y.size() != x.dim()) throw invalid_input("bump: dimension mismatch");
    CadlagPath out = stop(x, t);
    const std::size_t d = x.dim();
    for (std::size_t k = t; k < x.nodes(); ++k) {
        for (std::size_t c = 0; c < d; ++c) out.set_value(k, out.value(k, c) + y[c], c);
    }
    if (t > 0) out.add_to_jump(t, y);
    return out;
}

CadlagPath bump(const CadlagPath& x, std::size_t t, double y) {
    return bump(x, t, std::span<const double>(&y, 1));
}

CadlagPath replace_from(const CadlagPath& x, std::size_t t, std::span<const double> y) {
    check_node(x, t, "replace");
    if (y.size() != x.dim()) throw invalid_input("replace: dimension mismatch");
    CadlagPath out(x.grid(), x.dim());
    const std::size_t d = x.dim();
    for (std::size_t k = 0; k < x.nodes(); ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            out.set_value(k, (k < t) ? x.value(k, c) : y[c], c);
        }
    }
    std::vector<double> buf(d);
    for (std::uint32_t node : x.jump_nodes()) {
        if (node >= t) break;
        for (std::size_t c = 0; c < d; ++c) buf[c] = x.jump(node, c);
        out.set_jump(node, buf);
    }
    if (t > 0) {
        // Implied jump at t: new value minus the untouched left limit.
        for (std::size_t c = 0; c < d; ++c) buf[c] = y[c] - x.left_limit(t, c);
        out.set_jump(t, buf);
    }
    return out;
}

CadlagPath replace_from(const CadlagPath& x, std::size_t t, double y) {
    return replace_from(x, t, std::span<const double>(&y, 1));
}

double dtheta(std::size_t t, const CadlagPath& x, std::size_t t_prime,
              const CadlagPath& x_prime) {
    require_same_grid(x, x_prime);
    check_node(x, t, "dtheta");
    check_node(x_prime, t_prime, "dtheta");
    const std::size_t d = x.dim();
    double sup = 0.0;
    for (std::size_t k = 0; k < x.nodes(); ++k) {
        const std::size_t a = (k < t) ? k : t;
        const std::size_t b = (k < t_prime) ? k : t_prime;
        double n2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = x_prime.value(b, c) - x.value(a, c);
            n2 += diff * diff;
        }
        sup = std::max(sup, n2);
    }
    const double time_term =
        std::abs(x.grid().node(t_prime) - x.grid().node(t));
    return time_term + std::sqrt(sup);
}

double sup_norm(const CadlagPath& x) {
    const std::size_t d = x.dim();
    double sup = 0.0;
    for (std::size_t k = 0; k < x.nodes(); ++k) {
        double n2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double v = x.value(k, c);
            n2 += v * v;
        }
        sup = std::max(sup, n2);
    }
    return std::sqrt(sup);
}

namespace {

template <typename Op>
CadlagPath combine(const CadlagPath& a, const CadlagPath& b, Op op) {
    require_same_grid(a, b);
    CadlagPath out(a.grid(), a.dim());
    const std::size_t d = a.dim();
    for (std::size_t k = 0; k < a.nodes(); ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            out.set_value(k, op(a.value(k, c), b.value(k, c)), c);
        }
    }
    std::vector<double> buf(d);
    for (std::size_t k = 1; k < a.nodes(); ++k) {
        if (!a.has_jump(k) && !b.has_jump(k)) continue;
        for (std::size_t c = 0; c < d; ++c) buf[c] = op(a.jump(k, c), b.jump(k, c));
        out.set_jump(k, buf);
    }
    return out;
}

}  // namespace

CadlagPath add(const CadlagPath& a, const CadlagPath& b) {
    return combine(a, b, [](double u, double v) { return u + v; });
}

CadlagPath subtract(const CadlagPath& a, const CadlagPath& b) {
    return combine(a, b, [](double u, double v) { return u - v; });
}

CadlagPath scale(const CadlagPath& a, double factor) {
    CadlagPath out(a.grid(), a.dim());
    for (std::size_t k = 0; k < a.nodes(); ++k) {
        for (std::size_t c = 0; c < a.dim(); ++c) {
            out.set_value(k, factor * a.value(k, c), c);
        }
    }
    std::vector<double> buf(a.dim());
    for (std::uint32_t node : a.jump_nodes()) {
        for (std::size_t c = 0; c < a.dim(); ++c) buf[c] = factor * a.jump(node, c);
        out.set_jump(node, buf);
    }
    return out;
}

CadlagPath component(const CadlagPath& x, std::size_t comp) {
    if (comp >= x.dim()) throw invalid_input("component: index out of range");
    CadlagPath out(x.grid(), 1);
    for (std::size_t k = 0; k < x.nodes(); ++k) out.set_value(k, x.value(k, comp));
    for (std::uint32_t node : x.jump_nodes()) {
        if (x.jump(node, comp) != 0.0) out.set_jump(node, x.jump(node, comp));
    }
    return out;
}

}  // namespace itolab
