#include "lmpfa/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace lmpfa {

void StencilRow::add(Offset offset, double weight) {
    for (auto& e : entries_) {
        if (e.offset == offset) {
            e.weight += weight;
            return;
        }
    }
    entries_.push_back({offset, weight});
}

double StencilRow::weight(Offset offset) const {
    for (const auto& e : entries_) {
        if (e.offset == offset) {
            return e.weight;
        }
    }
    return 0.0;
}

bool StencilRow::contains(Offset offset) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const StencilEntry& e) { return e.offset == offset; });
}

double StencilRow::sum() const {
    double s = 0.0;
    for (const auto& e : entries_) {
        s += e.weight;
    }
    return s;
}

int StencilRow::reach() const {
    int r = 0;
    for (const auto& e : entries_) {
        if (e.weight != 0.0) {
            r = std::max({r, std::abs(e.offset.di), std::abs(e.offset.dj)});
        }
    }
    return r;
}

StencilRow& StencilRow::operator+=(const StencilRow& other) {
    for (const auto& e : other.entries_) {
        add(e.offset, e.weight);
    }
    return *this;
}

StencilRow& StencilRow::operator*=(double factor) {
    for (auto& e : entries_) {
        e.weight *= factor;
    }
    return *this;
}

bool operator==(const StencilRow& a, const StencilRow& b) {
    if (a.entries_.size() != b.entries_.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.entries_.size(); ++k) {
        if (a.entries_[k].offset != b.entries_[k].offset || a.entries_[k].weight != b.entries_[k].weight) {
            return false;
        }
    }
    return true;
}

NodeField::NodeField(int nodes_per_axis, double fill)
    : m_(nodes_per_axis),
      values_(static_cast<std::size_t>(nodes_per_axis) * static_cast<std::size_t>(nodes_per_axis), fill) {}

std::vector<double> NodeField::interior() const {
    const int n = m_ - 2;
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            v.push_back((*this)(i, j));
        }
    }
    return v;
}

void NodeField::set_interior(std::span<const double> v) {
    const int n = m_ - 2;
    if (v.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw std::invalid_argument("interior vector length does not match the field");
    }
    std::size_t k = 0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            (*this)(i, j) = v[k++];
        }
    }
}

double apply(const StencilRow& row, const NodeField& field, int i, int j) {
    double s = 0.0;
    for (const auto& e : row.entries()) {
        s += e.weight * field(i + e.offset.di, j + e.offset.dj);
    }
    return s;
}

StencilOperator::StencilOperator(int n) : n_(n), rows_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    if (n < 1) {
        throw std::invalid_argument("operator dimension must be positive");
    }
}

bool StencilOperator::targets_boundary(int i, int j, Offset o) const {
    const int ti = i + o.di;
    const int tj = j + o.dj;
    if (ti < 0 || tj < 0 || ti > n_ + 1 || tj > n_ + 1) {
        throw std::out_of_range("stencil offset leaves the node set");
    }
    return ti == 0 || tj == 0 || ti == n_ + 1 || tj == n_ + 1;
}

Eigen::SparseMatrix<double> StencilOperator::interior_matrix() const {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(rows_.size() * 9);
    for (int i = 1; i <= n_; ++i) {
        for (int j = 1; j <= n_; ++j) {
            const auto r = static_cast<Eigen::Index>(index(i, j));
            for (const auto& e : row(i, j).entries()) {
                if (targets_boundary(i, j, e.offset)) {
                    continue;
                }
                const auto c = static_cast<Eigen::Index>(index(i + e.offset.di, j + e.offset.dj));
                triplets.emplace_back(r, c, e.weight);
            }
        }
    }
    const auto dim = static_cast<Eigen::Index>(dimension());
    Eigen::SparseMatrix<double> m(dim, dim);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

std::vector<double> StencilOperator::boundary_vector(const NodeField& boundary) const {
    if (boundary.nodes_per_axis() != n_ + 2) {
        throw std::invalid_argument("boundary field does not match operator size");
    }
    std::vector<double> out(dimension(), 0.0);
    for (int i = 1; i <= n_; ++i) {
        for (int j = 1; j <= n_; ++j) {
            double s = 0.0;
            for (const auto& e : row(i, j).entries()) {
                if (targets_boundary(i, j, e.offset)) {
                    s += e.weight * boundary(i + e.offset.di, j + e.offset.dj);
                }
            }
            out[index(i, j)] = s;
        }
    }
    return out;
}

std::vector<double> StencilOperator::apply_interior(std::span<const double> v) const {
    if (v.size() != dimension()) {
        throw std::invalid_argument("vector length does not match operator dimension");
    }
    std::vector<double> out(dimension(), 0.0);
    for (int i = 1; i <= n_; ++i) {
        for (int j = 1; j <= n_; ++j) {
            double s = 0.0;
            for (const auto& e : row(i, j).entries()) {
                if (!targets_boundary(i, j, e.offset)) {
                    s += e.weight * v[index(i + e.offset.di, j + e.offset.dj)];
                }
            }
            out[index(i, j)] = s;
        }
    }
    return out;
}

std::size_t StencilOperator::bandwidth() const {
    std::size_t bw = 0;
    for (int i = 1; i <= n_; ++i) {
        for (int j = 1; j <= n_; ++j) {
            for (const auto& e : row(i, j).entries()) {
                if (e.weight == 0.0 || targets_boundary(i, j, e.offset)) {
                    continue;
                }
                const auto r = static_cast<long long>(index(i, j));
                const auto c = static_cast<long long>(index(i + e.offset.di, j + e.offset.dj));
                bw = std::max(bw, static_cast<std::size_t>(std::llabs(r - c)));
            }
        }
    }
    return bw;
}

}  // namespace lmpfa
