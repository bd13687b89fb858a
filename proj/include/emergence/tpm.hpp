#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emergence/dist.hpp"
#include "emergence/errors.hpp"

namespace emergence {

/**
 * Transition probability matrix: an n x n row-stochastic matrix where
 * rows[i][j] = p(s_j at t+1 | do(S = s_i) at t).
 *
 * The same type doubles as a channel matrix (inputs by rows, outputs by
 * columns). Rows are stored flat, row-major. State labels are optional.
 *
 * Immutable after construction; safe to share across threads.
 */
class Tpm {
public:
    Tpm() : n_(0) {}

    /// Validates squareness, entry range, and row stochasticity. Rows whose
    /// sum is within kProbTolerance of 1 are accepted verbatim, never
    /// renormalized.
    explicit Tpm(const std::vector<std::vector<double>>& rows,
                 std::vector<std::string> labels = {})
        : n_(rows.size()), labels_(std::move(labels)) {
        if (n_ == 0) throw NonSquare("a TPM needs at least one state");
        data_.reserve(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (rows[i].size() != n_) {
                throw NonSquare("row " + std::to_string(i) + " has " +
                                std::to_string(rows[i].size()) + " entries, expected " +
                                std::to_string(n_));
            }
            data_.insert(data_.end(), rows[i].begin(), rows[i].end());
        }
        validate_labels();
        validate_entries();
    }

    /// Trusted path for matrices that are stochastic by construction.
    struct Unchecked {};
    Tpm(Unchecked, std::size_t n, std::vector<double> flat,
        std::vector<std::string> labels = {})
        : n_(n), data_(std::move(flat)), labels_(std::move(labels)) {}

    std::size_t n() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

    /// Row i as a Dist (the effect repertoire of do(S = s_i)).
    Dist row_dist(std::size_t i) const {
        return Dist(Dist::Unchecked{},
                    std::vector<double>(data_.begin() + static_cast<long>(i * n_),
                                        data_.begin() + static_cast<long>((i + 1) * n_)));
    }

    const std::vector<double>& flat() const { return data_; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool operator==(const Tpm& other) const {
        return n_ == other.n_ && data_ == other.data_;
    }

private:
    void validate_labels() const {
        if (!labels_.empty() && labels_.size() != n_) {
            throw LengthMismatch("label count does not match state count");
        }
    }

    void validate_entries() const {
        for (std::size_t i = 0; i < n_; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                const double v = (*this)(i, j);
                if (!std::isfinite(v)) {
                    throw NonFiniteEntry("non-finite entry at (" + std::to_string(i) +
                                         "," + std::to_string(j) + ")");
                }
                if (v < 0.0) {
                    throw NegativeEntry("negative entry at (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
                }
                sum += v;
            }
            if (std::abs(sum - 1.0) > kProbTolerance) {
                throw RowSumOutOfTolerance(i, sum);
            }
        }
    }

    std::size_t n_;
    std::vector<double> data_;
    std::vector<std::string> labels_;
};

/// Checked constructor as a free function.
inline Tpm validate_tpm(const std::vector<std::vector<double>>& rows,
                        std::vector<std::string> labels = {}) {
    return Tpm(rows, std::move(labels));
}

/// n x n identity TPM (every state maps to itself with certainty).
inline Tpm identity_tpm(std::size_t n, std::vector<std::string> labels = {}) {
    std::vector<double> flat(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) flat[i * n + i] = 1.0;
    return Tpm(Tpm::Unchecked{}, n, std::move(flat), std::move(labels));
}

/// n x n TPM with every row uniform (the fully unconstrained system).
inline Tpm uniform_tpm(std::size_t n) {
    return Tpm(Tpm::Unchecked{}, n,
               std::vector<double>(n * n, 1.0 / static_cast<double>(n)));
}

}  // namespace emergence
