#include "gammadyn/sparse_seq.hpp"

#include <algorithm>
#include <cmath>

namespace gammadyn {

namespace {

bool finite(cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

} // namespace

SparseSeq SparseSeq::basis(std::int64_t j, cplx c) {
    SparseSeq s;
    if (!finite(c)) fail(ErrorCode::NonFiniteValue, "basis coefficient");
    if (c != cplx(0.0, 0.0)) s.entries_.emplace_back(j, c);
    return s;
}

SparseSeq SparseSeq::from_entries(std::vector<Entry> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    SparseSeq s;
    s.entries_.reserve(raw.size());
    for (const auto& [j, c] : raw) {
        if (!finite(c)) fail(ErrorCode::NonFiniteValue, "coefficient at index " + std::to_string(j));
        if (!s.entries_.empty() && s.entries_.back().first == j) {
            s.entries_.back().second += c;
            if (s.entries_.back().second == cplx(0.0, 0.0)) s.entries_.pop_back();
        } else if (c != cplx(0.0, 0.0)) {
            s.entries_.emplace_back(j, c);
        }
    }
    return s;
}

SparseSeq SparseSeq::from_sorted_unchecked(std::vector<Entry> sorted) {
    SparseSeq s;
    s.entries_ = std::move(sorted);
    return s;
}

cplx SparseSeq::at(std::int64_t j) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                               [](const Entry& e, std::int64_t v) { return e.first < v; });
    if (it != entries_.end() && it->first == j) return it->second;
    return {0.0, 0.0};
}

std::pair<std::int64_t, std::int64_t> SparseSeq::support_bounds() const {
    if (entries_.empty()) fail(ErrorCode::EmptySupport, "support_bounds of the zero vector");
    return {entries_.front().first, entries_.back().first};
}

SparseSeq ss_add(const SparseSeq& x, const SparseSeq& y) {
    std::vector<SparseSeq::Entry> merged;
    merged.reserve(x.entries().size() + y.entries().size());
    auto a = x.entries().begin(), ae = x.entries().end();
    auto b = y.entries().begin(), be = y.entries().end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->first < b->first)) {
            merged.push_back(*a++);
        } else if (a == ae || b->first < a->first) {
            merged.push_back(*b++);
        } else {
            const cplx sum = a->second + b->second;
            if (sum != cplx(0.0, 0.0)) merged.emplace_back(a->first, sum);
            ++a;
            ++b;
        }
    }
    return SparseSeq::from_sorted_unchecked(std::move(merged));
}

SparseSeq ss_sub(const SparseSeq& x, const SparseSeq& y) { return ss_add(x, ss_scale(-1.0, y)); }

SparseSeq ss_scale(cplx c, const SparseSeq& x) {
    if (!(std::isfinite(c.real()) && std::isfinite(c.imag())))
        fail(ErrorCode::NonFiniteValue, "scale factor");
    if (c == cplx(0.0, 0.0)) return {};
    std::vector<SparseSeq::Entry> scaled;
    scaled.reserve(x.entries().size());
    for (const auto& [j, v] : x.entries()) {
        const cplx p = c * v;
        if (p != cplx(0.0, 0.0)) scaled.emplace_back(j, p);
    }
    return SparseSeq::from_sorted_unchecked(std::move(scaled));
}

double ss_norm_sq(const SparseSeq& x) {
    double s = 0.0;
    for (const auto& [j, c] : x.entries()) s += std::norm(c);
    return s;
}

double ss_norm(const SparseSeq& x) { return std::sqrt(ss_norm_sq(x)); }

cplx ss_inner(const SparseSeq& x, const SparseSeq& y) {
    cplx s(0.0, 0.0);
    auto a = x.entries().begin(), ae = x.entries().end();
    auto b = y.entries().begin(), be = y.entries().end();
    while (a != ae && b != be) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            s += a->second * std::conj(b->second);
            ++a;
            ++b;
        }
    }
    return s;
}

DirectSumVec DirectSumVec::from_blocks(std::vector<Block> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const Block& a, const Block& b) { return a.first < b.first; });
    DirectSumVec v;
    for (auto& [i, seq] : raw) {
        if (i < 0) fail(ErrorCode::BlockOutOfRange, "negative block index");
        if (!v.blocks_.empty() && v.blocks_.back().first == i) {
            v.blocks_.back().second = ss_add(v.blocks_.back().second, seq);
            if (v.blocks_.back().second.is_zero()) v.blocks_.pop_back();
        } else if (!seq.is_zero()) {
            v.blocks_.emplace_back(i, std::move(seq));
        }
    }
    return v;
}

DirectSumVec DirectSumVec::single(int block, SparseSeq seq) {
    std::vector<Block> b;
    if (!seq.is_zero()) b.emplace_back(block, std::move(seq));
    return from_blocks(std::move(b));
}

const SparseSeq& DirectSumVec::block(int i) const {
    static const SparseSeq zero;
    auto it = std::lower_bound(blocks_.begin(), blocks_.end(), i,
                               [](const Block& b, int v) { return b.first < v; });
    if (it != blocks_.end() && it->first == i) return it->second;
    return zero;
}

DirectSumVec ds_add(const DirectSumVec& x, const DirectSumVec& y) {
    std::vector<DirectSumVec::Block> merged;
    auto a = x.blocks().begin(), ae = x.blocks().end();
    auto b = y.blocks().begin(), be = y.blocks().end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->first < b->first)) {
            merged.push_back(*a++);
        } else if (a == ae || b->first < a->first) {
            merged.push_back(*b++);
        } else {
            SparseSeq sum = ss_add(a->second, b->second);
            if (!sum.is_zero()) merged.emplace_back(a->first, std::move(sum));
            ++a;
            ++b;
        }
    }
    return DirectSumVec::from_blocks(std::move(merged));
}

DirectSumVec ds_sub(const DirectSumVec& x, const DirectSumVec& y) { return ds_add(x, ds_scale(-1.0, y)); }

DirectSumVec ds_scale(cplx c, const DirectSumVec& x) {
    std::vector<DirectSumVec::Block> scaled;
    for (const auto& [i, seq] : x.blocks()) {
        SparseSeq s = ss_scale(c, seq);
        if (!s.is_zero()) scaled.emplace_back(i, std::move(s));
    }
    return DirectSumVec::from_blocks(std::move(scaled));
}

double ds_norm_sq(const DirectSumVec& x) {
    double s = 0.0;
    for (const auto& [i, seq] : x.blocks()) s += ss_norm_sq(seq);
    return s;
}

double ds_norm(const DirectSumVec& x) { return std::sqrt(ds_norm_sq(x)); }

cplx ds_inner(const DirectSumVec& x, const DirectSumVec& y) {
    cplx s(0.0, 0.0);
    auto a = x.blocks().begin(), ae = x.blocks().end();
    auto b = y.blocks().begin(), be = y.blocks().end();
    while (a != ae && b != be) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            s += ss_inner(a->second, b->second);
            ++a;
            ++b;
        }
    }
    return s;
}

} // namespace gammadyn
