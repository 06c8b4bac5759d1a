// hilbert.hpp — Composite Hilbert-space layout: one three-level qutrit and n
// truncated bosonic modes, with optional leading two-level bookkeeping qubits.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace catgate {

/// Qutrit levels in storage order.
enum class Level : int { g = 0, e = 1, f = 2 };

inline Level level_from_char(char c) {
    switch (c) {
        case 'g': return Level::g;
        case 'e': return Level::e;
        case 'f': return Level::f;
        default: throw std::invalid_argument(std::string("unknown qutrit level '") + c + "'");
    }
}

/// Layout of the composite space. Flattening order (slowest to fastest index):
/// spectator qubits (if any), the qutrit, then cavities 1..n with cavity n
/// contiguous. Cutoffs are inclusive maximum photon numbers.
///
/// Single-mode specs (one cavity, no qutrit) carry the local states returned
/// by the state factories before they are embedded into a composite space.
class HilbertSpec {
public:
    static constexpr int kQutritDim = 3;

    /// Composite space: qutrit x n cavities (optionally preceded by
    /// two-level spectator factors that no operator ever acts on).
    HilbertSpec(int n_cavities, std::vector<int> cutoffs, int n_spectators = 0)
        : has_qutrit_(true), n_spectators_(n_spectators), cutoffs_(std::move(cutoffs)) {
        if (n_cavities < 1) throw std::invalid_argument("HilbertSpec: need at least one cavity");
        if (static_cast<int>(cutoffs_.size()) != n_cavities)
            throw std::invalid_argument("HilbertSpec: one cutoff per cavity required");
        if (n_spectators < 0) throw std::invalid_argument("HilbertSpec: negative spectator count");
        validate_cutoffs();
        build_dims();
    }

    /// Composite space with a uniform cutoff.
    HilbertSpec(int n_cavities, int cutoff)
        : HilbertSpec(n_cavities, std::vector<int>(static_cast<size_t>(std::max(n_cavities, 1)), cutoff)) {}

    /// One bosonic mode, no qutrit. Used for local states/operators.
    static HilbertSpec single_mode(int cutoff) {
        HilbertSpec s;
        s.has_qutrit_ = false;
        s.cutoffs_ = {cutoff};
        s.validate_cutoffs();
        s.build_dims();
        return s;
    }

    bool has_qutrit() const { return has_qutrit_; }
    int n_cavities() const { return static_cast<int>(cutoffs_.size()); }
    int n_spectators() const { return n_spectators_; }
    int cutoff(int j) const { return cutoffs_.at(static_cast<size_t>(j - 1)); }  // cavities are 1-based
    const std::vector<int>& cutoffs() const { return cutoffs_; }
    int qutrit_dim() const { return kQutritDim; }

    /// Total flattened dimension.
    std::int64_t dim() const { return dim_; }

    /// Number of tensor factors (spectators + qutrit + cavities).
    int n_factors() const { return static_cast<int>(factor_dims_.size()); }
    int factor_dim(int k) const { return factor_dims_.at(static_cast<size_t>(k)); }
    std::int64_t factor_stride(int k) const { return strides_.at(static_cast<size_t>(k)); }

    /// Stride of the qutrit index in the flattening.
    std::int64_t qutrit_stride() const {
        if (!has_qutrit_) throw std::logic_error("HilbertSpec: no qutrit in this space");
        return strides_[static_cast<size_t>(n_spectators_)];
    }
    /// Stride of cavity j (1-based).
    std::int64_t cavity_stride(int j) const {
        check_cavity(j);
        return strides_[static_cast<size_t>(n_spectators_ + (has_qutrit_ ? 1 : 0) + j - 1)];
    }

    /// Flatten per-factor indices (same factor order as the layout).
    std::int64_t flatten(const std::vector<int>& idx) const {
        if (static_cast<int>(idx.size()) != n_factors())
            throw std::invalid_argument("flatten: wrong number of indices");
        std::int64_t r = 0;
        for (int k = 0; k < n_factors(); ++k) {
            if (idx[static_cast<size_t>(k)] < 0 || idx[static_cast<size_t>(k)] >= factor_dims_[static_cast<size_t>(k)])
                throw std::out_of_range("flatten: index out of range");
            r += strides_[static_cast<size_t>(k)] * idx[static_cast<size_t>(k)];
        }
        return r;
    }

    std::vector<int> unflatten(std::int64_t i) const {
        if (i < 0 || i >= dim_) throw std::out_of_range("unflatten: index out of range");
        std::vector<int> idx(static_cast<size_t>(n_factors()));
        for (int k = 0; k < n_factors(); ++k) {
            idx[static_cast<size_t>(k)] = static_cast<int>(i / strides_[static_cast<size_t>(k)]);
            i %= strides_[static_cast<size_t>(k)];
        }
        return idx;
    }

    /// Qutrit level of flattened basis index i.
    int qutrit_index_of(std::int64_t i) const {
        return static_cast<int>((i / qutrit_stride()) % kQutritDim);
    }
    /// Photon number of cavity j at flattened basis index i.
    int photon_number_of(std::int64_t i, int j) const {
        return static_cast<int>((i / cavity_stride(j)) % (cutoff(j) + 1));
    }

    bool operator==(const HilbertSpec& o) const {
        return has_qutrit_ == o.has_qutrit_ && n_spectators_ == o.n_spectators_ && cutoffs_ == o.cutoffs_;
    }
    bool operator!=(const HilbertSpec& o) const { return !(*this == o); }

private:
    HilbertSpec() = default;

    void validate_cutoffs() const {
        for (int c : cutoffs_)
            if (c < 1) throw std::invalid_argument("HilbertSpec: cutoff must be >= 1");
    }

    void build_dims() {
        factor_dims_.clear();
        for (int s = 0; s < n_spectators_; ++s) factor_dims_.push_back(2);
        if (has_qutrit_) factor_dims_.push_back(kQutritDim);
        for (int c : cutoffs_) factor_dims_.push_back(c + 1);
        strides_.assign(factor_dims_.size(), 1);
        dim_ = 1;
        for (int k = static_cast<int>(factor_dims_.size()) - 1; k >= 0; --k) {
            strides_[static_cast<size_t>(k)] = dim_;
            dim_ *= factor_dims_[static_cast<size_t>(k)];
        }
    }

    void check_cavity(int j) const {
        if (j < 1 || j > n_cavities()) throw std::out_of_range("HilbertSpec: cavity index out of range");
    }

    bool has_qutrit_ = true;
    int n_spectators_ = 0;
    std::vector<int> cutoffs_;
    std::vector<int> factor_dims_;
    std::vector<std::int64_t> strides_;
    std::int64_t dim_ = 0;
};

}  // namespace catgate
