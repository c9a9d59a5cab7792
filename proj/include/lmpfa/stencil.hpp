#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

namespace lmpfa {

/// Neighbour offset (di, dj) relative to the row node.
struct Offset {
    int di = 0;
    int dj = 0;
    friend constexpr auto operator<=>(const Offset&, const Offset&) = default;
};

/// Faces of a control volume, outward normals +x, +y, -x, -y.
enum class Face { East, North, West, South };

struct StencilEntry {
    Offset offset;
    double weight = 0.0;
};

/// Sparse row keyed by neighbour offset. Entries keep insertion order so that
/// identical construction sequences give bitwise-identical rows.
class StencilRow {
public:
    void add(Offset offset, double weight);
    double weight(Offset offset) const;
    bool contains(Offset offset) const;
    std::span<const StencilEntry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    double sum() const;
    /// Largest |di| or |dj| over the stored offsets.
    int reach() const;

    StencilRow& operator+=(const StencilRow& other);
    StencilRow& operator*=(double factor);
    friend bool operator==(const StencilRow& a, const StencilRow& b);

private:
    std::vector<StencilEntry> entries_;
};

/// Values on all (N+2)^2 nodes, row i = fixed x index, j fastest.
class NodeField {
public:
    NodeField() = default;
    NodeField(int nodes_per_axis, double fill = 0.0);

    int nodes_per_axis() const { return m_; }
    double& operator()(int i, int j) { return values_[index(i, j)]; }
    double operator()(int i, int j) const { return values_[index(i, j)]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// Interior values ordered (1,1), (1,2), ..., (1,N), (2,1), ...
    std::vector<double> interior() const;
    void set_interior(std::span<const double> v);

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(j);
    }
    int m_ = 0;
    std::vector<double> values_;
};

/// Applies a stencil row at node (i, j) to a full node field.
double apply(const StencilRow& row, const NodeField& field, int i, int j);

/// One stencil row per interior node (i, j), 1 <= i, j <= N.
///
/// Offsets reaching a boundary node are Dirichlet couplings: they stay in the
/// row and are split off into the boundary vector on conversion.
class StencilOperator {
public:
    explicit StencilOperator(int n);

    int n() const { return n_; }
    std::size_t dimension() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j - 1);
    }

    StencilRow& row(int i, int j) { return rows_[index(i, j)]; }
    const StencilRow& row(int i, int j) const { return rows_[index(i, j)]; }

    bool targets_boundary(int i, int j, Offset o) const;

    /// Interior-to-interior couplings as an N^2 x N^2 matrix.
    Eigen::SparseMatrix<double> interior_matrix() const;
    /// Sum of boundary couplings times the Dirichlet values in `boundary`.
    std::vector<double> boundary_vector(const NodeField& boundary) const;
    /// Matrix-vector product of the interior part.
    std::vector<double> apply_interior(std::span<const double> v) const;
    /// Max |row - col| over the interior part.
    std::size_t bandwidth() const;

private:
    int n_;
    std::vector<StencilRow> rows_;
};

}  // namespace lmpfa
