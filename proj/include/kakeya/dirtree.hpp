// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "kakeya/bitstring.hpp"
#include "kakeya/dyadic.hpp"
#include "kakeya/error.hpp"
#include "kakeya/interval.hpp"

namespace kakeya {

// A finite parent-closed subtree of the binary tree, rooted at "0".
//
// Vertices are stored parents-first (breadth-first order), so a reverse scan
// visits children before their parents.
class DirTree {
public:
    static constexpr int npos = -1;

    struct Node {
        BitString id;
        int parent = npos;
        std::array<int, 2> child{npos, npos};

        int child_count() const noexcept { return (child[0] != npos) + (child[1] != npos); }
        bool splits() const noexcept { return child[0] != npos && child[1] != npos; }
        bool is_leaf() const noexcept { return child[0] == npos && child[1] == npos; }
    };

    // The single-vertex tree {"0"}.
    DirTree() : DirTree(std::vector<BitString>{BitString::root()}) {}

    // Throws invalid_input if the root is missing or some vertex lacks its parent.
    explicit DirTree(std::vector<BitString> vertices) {
        std::sort(vertices.begin(), vertices.end(), BreadthFirstOrder{});
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        if (vertices.empty() || !vertices.front().is_root()) throw invalid_input("tree must contain the root 0");
        nodes_.reserve(vertices.size());
        index_.reserve(vertices.size() * 2);
        for (auto& v : vertices) {
            Node n{std::move(v)};
            if (!n.id.is_root()) {
                auto it = index_.find(n.id.parent().str());
                if (it == index_.end())
                    throw invalid_input("tree is not parent-closed: missing parent of " + n.id.str());
                n.parent = it->second;
                nodes_[static_cast<std::size_t>(it->second)].child[static_cast<std::size_t>(n.id.last_bit())] =
                    static_cast<int>(nodes_.size());
            }
            height_ = std::max(height_, n.id.height());
            index_.emplace(n.id.str(), static_cast<int>(nodes_.size()));
            nodes_.push_back(std::move(n));
        }
    }

    template <class Range>
    static DirTree from_range(const Range& r) {
        return DirTree(std::vector<BitString>(std::begin(r), std::end(r)));
    }

    // The full binary tree of height h.
    static DirTree full(std::uint64_t h) {
        std::vector<BitString> v;
        for (std::uint64_t i = 1; i < (std::uint64_t{2} << h); ++i) v.push_back(BitString::from_heap_index(i));
        return DirTree(std::move(v));
    }

    std::size_t size() const noexcept { return nodes_.size(); }
    std::uint64_t height() const noexcept { return height_; }
    int root() const noexcept { return 0; }

    const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const BitString& id(int i) const { return node(i).id; }

    int find(const BitString& v) const {
        auto it = index_.find(v.str());
        return it == index_.end() ? npos : it->second;
    }
    bool contains(const BitString& v) const { return find(v) != npos; }

    int child(int i, int c) const { return node(i).child[static_cast<std::size_t>(c)]; }

    std::vector<int> children(int i) const {
        std::vector<int> out;
        for (int c : node(i).child)
            if (c != npos) out.push_back(c);
        return out;
    }

    std::vector<BitString> vertices() const {
        std::vector<BitString> out;
        out.reserve(nodes_.size());
        for (const auto& n : nodes_) out.push_back(n.id);
        return out;
    }

    std::vector<int> at_height(std::uint64_t k) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].id.height() == k) out.push_back(static_cast<int>(i));
        return out;
    }

    std::vector<int> leaves() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].is_leaf()) out.push_back(static_cast<int>(i));
        return out;
    }

    bool has_uniform_leaf_height() const {
        for (const auto& n : nodes_)
            if (n.is_leaf() && n.id.height() != height_) return false;
        return true;
    }

    // Vertices of height <= n.
    DirTree truncate(std::uint64_t n) const {
        std::vector<BitString> v;
        for (const auto& node : nodes_)
            if (node.id.height() <= n) v.push_back(node.id);
        return DirTree(std::move(v));
    }

    // Lowest splitting vertex in the subtree of i (including i), or npos.
    // Ties at equal height resolve to the leftmost.
    int shallowest_split_below(int i) const {
        std::vector<int> frontier{i};
        while (!frontier.empty()) {
            for (int v : frontier)
                if (node(v).splits()) return v;
            std::vector<int> next;
            for (int v : frontier)
                for (int c : node(v).child)
                    if (c != npos) next.push_back(c);
            frontier = std::move(next);
        }
        return npos;
    }

    // Newline-separated vertex list; '#' lines are comments.
    void write(std::ostream& os) const {
        for (const auto& n : nodes_) os << n.id.str() << '\n';
    }
    std::string to_text() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }
    static DirTree read(std::istream& is) {
        std::vector<BitString> v;
        std::string line;
        while (std::getline(is, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
            std::size_t start = line.find_first_not_of(" \t");
            if (start == std::string::npos || line[start] == '#') continue;
            v.emplace_back(std::string_view(line).substr(start));
        }
        return DirTree(std::move(v));
    }
    static DirTree from_text(const std::string& text) {
        std::istringstream is(text);
        return read(is);
    }

    friend bool operator==(const DirTree& a, const DirTree& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.nodes_.size(); ++i)
            if (a.nodes_[i].id != b.nodes_[i].id) return false;
        return true;
    }

private:
    std::vector<Node> nodes_;
    std::unordered_map<std::string, int> index_;
    std::uint64_t height_ = 0;
};

// (T_Omega)^depth: every vertex of height <= depth whose closed interval meets
// a direction. A direction on a dyadic boundary lies in both adjacent
// intervals.
template <class Range>
DirTree build_tree(const Range& directions, std::uint64_t depth) {
    std::set<BitString, BreadthFirstOrder> verts;
    verts.insert(BitString::root());
    bool any = false;
    for (const Dyadic& d : directions) {
        any = true;
        if (d < Dyadic(0) || Dyadic(1) < d) throw invalid_input("direction outside [0,1]: " + d.to_string());
        for (std::uint64_t k = 1; k <= depth; ++k) {
            const BigInt limit = BigInt(1) << static_cast<unsigned>(k);
            const BigInt j = d.floor_scaled(k);
            const bool boundary = d.scales_to_integer(k);
            if (j < limit) verts.insert(BitString::from_level_index(k, j));
            if (boundary && j > 0) verts.insert(BitString::from_level_index(k, j - 1));
        }
    }
    if (!any) throw invalid_input("direction set is empty");
    return DirTree(std::vector<BitString>(verts.begin(), verts.end()));
}

} // namespace kakeya
