#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "itolab/time_grid.hpp"

namespace itolab {

/// A cadlag sample path on a uniform grid. values[k] is the
/// right-continuous value at node k; the jump registry stores the exact
/// jump size at each jump node, so left limits are recovered without
/// smearing: left(k) = value(k) - jump(k). Between registered jumps the
/// path is read as continuous (piecewise linear between nodes).
///
/// Jumps at node 0 are forbidden by convention (M_0 = A_0 = 0).
class CadlagPath {
public:
    CadlagPath(TimeGrid grid, std::size_t dim = 1);

    static CadlagPath constant(TimeGrid grid, double value, std::size_t dim = 1);

    const TimeGrid& grid() const { return grid_; }
    std::size_t dim() const { return dim_; }
    std::size_t nodes() const { return grid_.node_count(); }

    double value(std::size_t node, std::size_t comp = 0) const {
        return values_[node * dim_ + comp];
    }
    double jump(std::size_t node, std::size_t comp = 0) const {
        return jumps_[node * dim_ + comp];
    }
    double left_limit(std::size_t node, std::size_t comp = 0) const {
        return values_[node * dim_ + comp] - jumps_[node * dim_ + comp];
    }
    bool has_jump(std::size_t node) const;

    /// Sorted list of nodes carrying a registered jump.
    const std::vector<std::uint32_t>& jump_nodes() const { return jump_nodes_; }

    std::span<const double> values() const { return values_; }
    std::span<const double> jumps() const { return jumps_; }

    void set_value(std::size_t node, double v, std::size_t comp = 0) {
        values_[node * dim_ + comp] = v;
    }
    /// Sets the registered jump at a node (node >= 1). A jump of exactly
    /// zero in every component clears the registry entry.
    void set_jump(std::size_t node, std::span<const double> size);
    void set_jump(std::size_t node, double size);
    void add_to_jump(std::size_t node, std::span<const double> delta);
    void clear_jump(std::size_t node);

    /// All entries finite; registry consistent with the dense jump array.
    void validate() const;

    bool identical(const CadlagPath& other) const;

private:
    void sync_registry(std::size_t node);

    TimeGrid grid_;
    std::size_t dim_;
    std::vector<double> values_;
    std::vector<double> jumps_;
    std::vector<std::uint32_t> jump_nodes_;
};

// ---- Dupire / Skorokhod path operators -----------------------------------

/// x_{t/\}: freeze the path at its value at node t.
CadlagPath stop(const CadlagPath& x, std::size_t t);

/// x^-_{t/\}: freeze at the left limit at node t; the jump at t is removed.
CadlagPath predictable_stop(const CadlagPath& x, std::size_t t);

/// x (+)_t y: stopped path shifted by y from t on.
CadlagPath bump(const CadlagPath& x, std::size_t t, std::span<const double> y);
CadlagPath bump(const CadlagPath& x, std::size_t t, double y);

/// x (#)_t y: value replaced by y from t on.
CadlagPath replace_from(const CadlagPath& x, std::size_t t, std::span<const double> y);
CadlagPath replace_from(const CadlagPath& x, std::size_t t, double y);

/// Pseudo-distance |t' - t| + sup_k |stop(x', t')_k - stop(x, t)_k|.
double dtheta(std::size_t t, const CadlagPath& x, std::size_t t_prime,
              const CadlagPath& x_prime);

/// max over nodes of the Euclidean norm of the node value.
double sup_norm(const CadlagPath& x);

// ---- Arithmetic (same grid and dimension; registries combine exactly) ----

CadlagPath add(const CadlagPath& a, const CadlagPath& b);
CadlagPath subtract(const CadlagPath& a, const CadlagPath& b);
CadlagPath scale(const CadlagPath& a, double factor);

/// Single-component view as a scalar path.
CadlagPath component(const CadlagPath& x, std::size_t comp);

void require_same_grid(const CadlagPath& a, const CadlagPath& b);

}  // namespace itolab
