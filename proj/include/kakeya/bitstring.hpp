// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "kakeya/dyadic.hpp"
#include "kakeya/error.hpp"

namespace kakeya {

// A vertex of the infinite binary tree: the root symbol '0' followed by the
// path bits. Height is the number of path bits; prefix order is ancestry.
class BitString {
public:
    BitString() : bits_("0") {}

    explicit BitString(std::string_view text) : bits_(text) {
        if (bits_.empty() || bits_.front() != '0')
            throw invalid_input("bit string must start with the root symbol 0: '" + bits_ + "'");
        for (char c : bits_)
            if (c != '0' && c != '1') throw invalid_input("bit string has a non-binary symbol: '" + bits_ + "'");
    }

    static BitString root() { return BitString(); }

    // The vertex at height k whose interval is [j 2^-k, (j+1) 2^-k].
    static BitString from_level_index(std::uint64_t k, const BigInt& j) {
        if (j < 0 || j >= (BigInt(1) << static_cast<unsigned>(k)))
            throw invalid_input("level index out of range");
        std::string s(k + 1, '0');
        for (std::uint64_t i = 0; i < k; ++i)
            if (boost::multiprecision::bit_test(j, static_cast<unsigned>(k - 1 - i))) s[i + 1] = '1';
        return BitString(std::move(s), trusted{});
    }

    // Heap numbering of the full tree: root 1, children 2i and 2i+1.
    static BitString from_heap_index(std::uint64_t idx) {
        if (idx == 0) throw invalid_input("heap index 0 is not a vertex");
        std::string s = "0";
        int top = 63;
        while (((idx >> top) & 1U) == 0) --top;
        for (int b = top - 1; b >= 0; --b) s.push_back(((idx >> b) & 1U) ? '1' : '0');
        return BitString(std::move(s), trusted{});
    }

    std::uint64_t heap_index() const {
        if (height() > 62) throw invalid_input("vertex too deep for heap indexing");
        std::uint64_t idx = 1;
        for (std::size_t i = 1; i < bits_.size(); ++i) idx = (idx << 1) | (bits_[i] == '1' ? 1U : 0U);
        return idx;
    }

    // Index j with interval [j 2^-k, (j+1) 2^-k].
    BigInt level_index() const {
        BigInt j = 0;
        for (std::size_t i = 1; i < bits_.size(); ++i) {
            j <<= 1;
            if (bits_[i] == '1') j += 1;
        }
        return j;
    }

    const std::string& str() const noexcept { return bits_; }
    std::uint64_t height() const noexcept { return bits_.size() - 1; }
    bool is_root() const noexcept { return bits_.size() == 1; }
    int last_bit() const noexcept { return bits_.back() == '1' ? 1 : 0; }

    BitString parent() const {
        if (is_root()) throw invalid_input("the root has no parent");
        return BitString(bits_.substr(0, bits_.size() - 1), trusted{});
    }
    BitString child(int c) const { return BitString(bits_ + (c ? '1' : '0'), trusted{}); }
    BitString ancestor_at(std::uint64_t k) const {
        if (k > height()) throw invalid_input("ancestor height above vertex height");
        return BitString(bits_.substr(0, k + 1), trusted{});
    }

    // Proper ancestry.
    bool is_ancestor_of(const BitString& other) const noexcept {
        return bits_.size() < other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
    }
    bool is_ancestor_or_self_of(const BitString& other) const noexcept {
        return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
    }

    friend auto operator<=>(const BitString&, const BitString&) = default;
    friend bool operator==(const BitString&, const BitString&) = default;

private:
    struct trusted {};
    BitString(std::string s, trusted) : bits_(std::move(s)) {}

    std::string bits_;
};

// Parents before children, then left to right.
struct BreadthFirstOrder {
    bool operator()(const BitString& a, const BitString& b) const noexcept {
        if (a.height() != b.height()) return a.height() < b.height();
        return a.str() < b.str();
    }
};

inline std::ostream& operator<<(std::ostream& os, const BitString& b) { return os << b.str(); }

} // namespace kakeya

template <>
struct std::hash<kakeya::BitString> {
    std::size_t operator()(const kakeya::BitString& b) const noexcept { return std::hash<std::string>{}(b.str()); }
};
