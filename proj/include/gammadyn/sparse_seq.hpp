#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "gammadyn/errors.hpp"

namespace gammadyn {

using cplx = std::complex<double>;

/// Finitely supported bilateral sequence: a sparse vector indexed over the
/// integers with complex double coefficients. Stored coefficients are
/// nonzero and finite, entries are kept sorted by index, so two values are
/// equal iff their entry lists are identical. Immutable after construction.
class SparseSeq {
public:
    using Entry = std::pair<std::int64_t, cplx>;

    SparseSeq() = default;

    /// c * e_j (empty when c == 0).
    static SparseSeq basis(std::int64_t j, cplx c = cplx(1.0, 0.0));

    /// Builds from raw entries: duplicates are summed, zeros dropped,
    /// non-finite coefficients rejected.
    static SparseSeq from_entries(std::vector<Entry> raw);

    const std::vector<Entry>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    /// Coefficient at index j; zero when absent.
    cplx at(std::int64_t j) const;

    /// (min_index, max_index) of the support; EmptySupport on the zero vector.
    std::pair<std::int64_t, std::int64_t> support_bounds() const;

    friend bool operator==(const SparseSeq& a, const SparseSeq& b) {
        return a.entries_ == b.entries_;
    }
    friend bool operator!=(const SparseSeq& a, const SparseSeq& b) { return !(a == b); }

private:
    friend SparseSeq ss_add(const SparseSeq&, const SparseSeq&);
    friend SparseSeq ss_scale(cplx, const SparseSeq&);
    friend class Shifted; // internal shift kernels build entries directly
    static SparseSeq from_sorted_unchecked(std::vector<Entry> sorted);

    std::vector<Entry> entries_;
};

SparseSeq ss_add(const SparseSeq& x, const SparseSeq& y);
SparseSeq ss_sub(const SparseSeq& x, const SparseSeq& y);
SparseSeq ss_scale(cplx c, const SparseSeq& x);
double ss_norm_sq(const SparseSeq& x);
double ss_norm(const SparseSeq& x);

/// Hilbert inner product, conjugate-linear in the second argument.
cplx ss_inner(const SparseSeq& x, const SparseSeq& y);

/// Finite direct sum of sparse sequences. Block indices are nonnegative,
/// absent blocks are zero, stored blocks are nonzero.
class DirectSumVec {
public:
    using Block = std::pair<int, SparseSeq>;

    DirectSumVec() = default;

    static DirectSumVec from_blocks(std::vector<Block> raw);
    static DirectSumVec single(int block, SparseSeq seq);

    const std::vector<Block>& blocks() const { return blocks_; }
    bool is_zero() const { return blocks_.empty(); }

    /// Block i; the zero sequence when absent.
    const SparseSeq& block(int i) const;

    /// Largest nonzero block index, -1 for the zero vector.
    int max_block() const { return blocks_.empty() ? -1 : blocks_.back().first; }

    friend bool operator==(const DirectSumVec& a, const DirectSumVec& b) {
        return a.blocks_ == b.blocks_;
    }
    friend bool operator!=(const DirectSumVec& a, const DirectSumVec& b) { return !(a == b); }

private:
    std::vector<Block> blocks_;
};

DirectSumVec ds_add(const DirectSumVec& x, const DirectSumVec& y);
DirectSumVec ds_sub(const DirectSumVec& x, const DirectSumVec& y);
DirectSumVec ds_scale(cplx c, const DirectSumVec& x);
double ds_norm_sq(const DirectSumVec& x);
double ds_norm(const DirectSumVec& x);
cplx ds_inner(const DirectSumVec& x, const DirectSumVec& y);

} // namespace gammadyn
