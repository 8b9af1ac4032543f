#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace fedcomp {

using NodeId = std::size_t;

/// Sorted, duplicate-free list of node indices.
using NodeSet = std::vector<NodeId>;

/// Dense square boolean matrix stored as packed 64-bit row words.
///
/// Rows are the unit of the word-parallel operations the selector relies on
/// (row union, row intersection test), so a row can be treated as the set
/// {q : at(p, q)}.
class BitMatrix {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitMatrix() = default;
    explicit BitMatrix(std::size_t n)
        : n_(n), words_per_row_((n + kWordBits - 1) / kWordBits), bits_(n * words_per_row_, 0) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i);
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t words_per_row() const noexcept { return words_per_row_; }

    bool at(std::size_t row, std::size_t col) const noexcept {
        return (bits_[row * words_per_row_ + col / kWordBits] >> (col % kWordBits)) & 1U;
    }

    void set(std::size_t row, std::size_t col, bool value = true) noexcept {
        Word& w = bits_[row * words_per_row_ + col / kWordBits];
        const Word mask = Word{1} << (col % kWordBits);
        w = value ? (w | mask) : (w & ~mask);
    }

    const Word* row(std::size_t r) const noexcept { return bits_.data() + r * words_per_row_; }
    Word* row(std::size_t r) noexcept { return bits_.data() + r * words_per_row_; }

    /// row(dst) |= row(src)
    void or_row_into(std::size_t dst, std::size_t src) noexcept {
        Word* d = row(dst);
        const Word* s = row(src);
        for (std::size_t k = 0; k < words_per_row_; ++k) d[k] |= s[k];
    }

    /// Members of a row as a sorted node list.
    NodeSet row_members(std::size_t r) const {
        NodeSet out;
        const Word* w = row(r);
        for (std::size_t k = 0; k < words_per_row_; ++k) {
            Word bits = w[k];
            while (bits != 0) {
                out.push_back(k * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    /// Members of a column as a sorted node list.
    NodeSet column_members(std::size_t c) const {
        NodeSet out;
        for (std::size_t r = 0; r < n_; ++r)
            if (at(r, c)) out.push_back(r);
        return out;
    }

    BitMatrix transposed() const {
        BitMatrix t(n_);
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = 0; c < n_; ++c)
                if (at(r, c)) t.set(c, r);
        return t;
    }

    std::size_t count() const noexcept {
        std::size_t total = 0;
        for (Word w : bits_) total += static_cast<std::size_t>(std::popcount(w));
        return total;
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<Word> bits_;
};

/// Word buffer sized for one row of an n-node BitMatrix.
class BitRow {
public:
    explicit BitRow(std::size_t n) : words_((n + BitMatrix::kWordBits - 1) / BitMatrix::kWordBits, 0) {}

    void set(std::size_t i) noexcept { words_[i / BitMatrix::kWordBits] |= BitMatrix::Word{1} << (i % BitMatrix::kWordBits); }
    bool test(std::size_t i) const noexcept { return (words_[i / BitMatrix::kWordBits] >> (i % BitMatrix::kWordBits)) & 1U; }

    void or_with(const BitMatrix::Word* other) noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other[k];
    }

    bool intersects(const BitMatrix::Word* other) const noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if ((words_[k] & other[k]) != 0) return true;
        return false;
    }

    const BitMatrix::Word* data() const noexcept { return words_.data(); }

    NodeSet members() const {
        NodeSet out;
        for (std::size_t k = 0; k < words_.size(); ++k) {
            BitMatrix::Word bits = words_[k];
            while (bits != 0) {
                out.push_back(k * BitMatrix::kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

private:
    std::vector<BitMatrix::Word> words_;
};

}  // namespace fedcomp
