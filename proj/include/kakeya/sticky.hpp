// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kakeya/bitstring.hpp"
#include "kakeya/dirtree.hpp"
#include "kakeya/dyadic.hpp"
#include "kakeya/error.hpp"

namespace kakeya {

// A sticky map sigma: B^h -> T.
//
// Vertices of B^h are addressed by heap index (root 1, children 2i, 2i+1).
// Every non-root vertex u carries one choice bit selecting a child of
// sigma(parent(u)); the bit is ignored where that image has a single child.
class StickyMap {
public:
    static constexpr std::uint64_t max_height = 24;

    StickyMap(std::shared_ptr<const DirTree> tree, std::uint64_t h, std::vector<std::uint8_t> choices)
        : tree_(std::move(tree)), h_(h), choices_(std::move(choices)) {
        if (!tree_) throw invalid_input("sticky map needs a target tree");
        if (h_ > max_height) throw invalid_input("sticky map height too large");
        const std::size_t n = std::size_t{2} << h_;
        if (choices_.size() != n) throw invalid_input("choice vector has wrong size");
        image_.assign(n, DirTree::npos);
        image_[1] = tree_->root();
        for (std::size_t i = 2; i < n; ++i) {
            const auto& parent = tree_->node(image_[i / 2]);
            if (parent.is_leaf())
                throw invalid_input("target tree has no vertex below " + parent.id.str() + " at height " +
                                    std::to_string(parent.id.height() + 1));
            if (parent.splits())
                image_[i] = parent.child[choices_[i] & 1U];
            else
                image_[i] = parent.child[parent.child[0] != DirTree::npos ? 0 : 1];
        }
    }

    const DirTree& tree() const noexcept { return *tree_; }
    const std::shared_ptr<const DirTree>& tree_ptr() const noexcept { return tree_; }
    std::uint64_t height() const noexcept { return h_; }
    const std::vector<std::uint8_t>& choices() const noexcept { return choices_; }

    // Tree node index of sigma(u).
    int image_index(std::uint64_t heap) const { return image_.at(heap); }
    int image_index(const BitString& u) const { return image_index(checked_heap(u)); }
    const BitString& image(const BitString& u) const { return tree_->id(image_index(u)); }

    // Leaves of B^h in increasing order of their intervals.
    std::uint64_t leaf_count() const noexcept { return std::uint64_t{1} << h_; }
    int leaf_image_index(std::uint64_t j) const { return image_[leaf_count() + j]; }
    BitString leaf(std::uint64_t j) const { return BitString::from_heap_index(leaf_count() + j); }

    // Two-column text "vertex image" for every vertex of B^h.
    void write(std::ostream& os) const {
        for (std::size_t i = 1; i < image_.size(); ++i)
            os << BitString::from_heap_index(i).str() << ' ' << tree_->id(image_[i]).str() << '\n';
    }
    std::string to_text() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }

    friend bool operator==(const StickyMap& a, const StickyMap& b) {
        return a.h_ == b.h_ && a.image_ == b.image_ && (a.tree_ == b.tree_ || *a.tree_ == *b.tree_);
    }

private:
    std::uint64_t checked_heap(const BitString& u) const {
        if (u.height() > h_) throw invalid_input("vertex " + u.str() + " is deeper than the map height");
        return u.heap_index();
    }

    std::shared_ptr<const DirTree> tree_;
    std::uint64_t h_;
    std::vector<std::uint8_t> choices_;
    std::vector<int> image_;
};

// Checks an explicit assignment and converts it to a StickyMap. The
// assignment must cover every vertex of B^h for h = the largest key height.
inline StickyMap validate(const std::map<BitString, BitString>& sigma, std::shared_ptr<const DirTree> t) {
    if (!t) throw invalid_input("validate: no target tree");
    if (sigma.empty()) throw invalid_input("validate: empty assignment");
    std::uint64_t h = 0;
    for (const auto& [u, img] : sigma) h = std::max(h, u.height());
    if (h > StickyMap::max_height) throw invalid_input("validate: height too large");

    for (const auto& [u, img] : sigma) {
        if (img.height() != u.height())
            throw invalid_input("height mismatch at " + u.str() + ": image " + img.str() + " has height " +
                                std::to_string(img.height()));
        if (!t->contains(img)) throw invalid_input("image of " + u.str() + " is outside the tree: " + img.str());
        if (!u.is_root()) {
            auto it = sigma.find(u.parent());
            if (it != sigma.end() && img.parent() != it->second)
                throw invalid_input("ancestry violation at " + u.str() + ": image " + img.str() +
                                    " is not a child of " + it->second.str());
        }
    }
    const std::size_t n = std::size_t{2} << h;
    std::vector<std::uint8_t> choices(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        const BitString u = BitString::from_heap_index(i);
        auto it = sigma.find(u);
        if (it == sigma.end()) throw invalid_input("assignment is not total: missing " + u.str());
        if (i >= 2) choices[i] = static_cast<std::uint8_t>(it->second.last_bit());
    }
    StickyMap m(std::move(t), h, std::move(choices));
    for (const auto& [u, img] : sigma)
        if (m.image(u) != img) throw invalid_input("assignment at " + u.str() + " is not realisable");
    return m;
}

// Builds a map from its leaf images alone; interior images are the common
// ancestors, which must agree across siblings.
inline std::map<BitString, BitString> extend_leaf_images(const std::map<BitString, BitString>& leaves) {
    std::map<BitString, BitString> out;
    for (const auto& [u, img] : leaves) {
        if (img.height() != u.height())
            throw invalid_input("height mismatch at " + u.str() + ": image " + img.str());
        for (std::uint64_t k = 0; k <= u.height(); ++k) {
            const BitString a = u.ancestor_at(k);
            const BitString ia = img.ancestor_at(k);
            auto [it, fresh] = out.emplace(a, ia);
            if (!fresh && it->second != ia)
                throw invalid_input("ancestry violation at " + a.str() + ": leaves below it map under both " +
                                    it->second.str() + " and " + ia.str());
        }
    }
    return out;
}

// Independent uniform child choice at every vertex of B^h.
inline StickyMap sample(std::shared_ptr<const DirTree> t, std::uint64_t h, std::uint64_t seed) {
    if (!t) throw invalid_input("sample: no target tree");
    for (int leaf : t->leaves())
        if (t->id(leaf).height() < h)
            throw invalid_input("target tree is missing height " + std::to_string(t->id(leaf).height() + 1) +
                                " below " + t->id(leaf).str());
    if (h > StickyMap::max_height) throw invalid_input("sample: height too large");
    std::mt19937_64 gen(seed);
    const std::size_t n = std::size_t{2} << h;
    std::vector<std::uint8_t> choices(n, 0);
    std::uint64_t word = 0;
    int left = 0;
    for (std::size_t i = 2; i < n; ++i) {
        if (left == 0) {
            word = gen();
            left = 64;
        }
        choices[i] = static_cast<std::uint8_t>(word & 1U);
        word >>= 1;
        --left;
    }
    return StickyMap(std::move(t), h, std::move(choices));
}

// Exact number of sticky maps B^h -> T: with c(t) = 1 at height h and
// c(t) = (sum over children t' of c(t'))^2 above, the count is c(root).
inline BigInt count_sticky(const DirTree& t, std::uint64_t h) {
    std::vector<BigInt> c(t.size(), BigInt(0));
    for (std::size_t i = t.size(); i-- > 0;) {
        const auto& n = t.nodes()[i];
        if (n.id.height() > h) continue;
        if (n.id.height() == h) {
            c[i] = 1;
            continue;
        }
        BigInt s = 0;
        for (int ch : n.child)
            if (ch != DirTree::npos) s += c[static_cast<std::size_t>(ch)];
        c[i] = s * s;
    }
    return c[0];
}

// Visits every sticky map B^h -> T once. Throws cap_exceeded before
// visiting if count_sticky exceeds cap.
inline void for_each_sticky(std::shared_ptr<const DirTree> t, std::uint64_t h,
                            const std::function<void(const StickyMap&)>& visit, double cap = 1048576.0) {
    if (!t) throw invalid_input("for_each_sticky: no target tree");
    if (h > StickyMap::max_height) throw invalid_input("for_each_sticky: height too large");
    for (int leaf : t->leaves())
        if (t->id(leaf).height() < h) throw invalid_input("target tree is missing heights below " + t->id(leaf).str());
    const BigInt total = count_sticky(*t, h);
    if (total > BigInt(static_cast<long long>(cap)))
        throw cap_exceeded("sticky map enumeration exceeds cap", total.convert_to<double>(), cap);
    const std::size_t n = std::size_t{2} << h;
    std::vector<std::uint8_t> choices(n, 0);
    std::vector<int> image(n, DirTree::npos);
    image[1] = t->root();
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            visit(StickyMap(t, h, choices));
            return;
        }
        const auto& parent = t->node(image[i / 2]);
        if (parent.splits()) {
            for (std::uint8_t b : {0, 1}) {
                choices[i] = b;
                image[i] = parent.child[b];
                rec(i + 1);
            }
            choices[i] = 0;
        } else {
            image[i] = parent.child[parent.child[0] != DirTree::npos ? 0 : 1];
            rec(i + 1);
        }
    };
    rec(2);
}

// One assignment on the forest spanned by a set of leaves of B^h: the
// vertices in breadth-first order and the tree node index of each image.
struct RestrictedAssignment {
    std::vector<std::uint64_t> vertices; // heap indices
    std::vector<int> images;

    int image_of(std::uint64_t heap) const {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i] == heap) return images[i];
        return DirTree::npos;
    }
};

namespace detail {

struct SpannedForest {
    std::vector<std::uint64_t> vertices;    // heap indices, breadth-first
    std::vector<std::array<int, 2>> kids;   // positions in vertices, -1 if absent
    std::vector<int> parent;                // position, -1 for the root
};

inline SpannedForest spanned_forest(std::uint64_t h, const std::vector<BitString>& relevant) {
    std::set<std::uint64_t> s;
    for (const auto& b : relevant) {
        if (b.height() != h) throw invalid_input("relevant vertex " + b.str() + " is not a leaf of B^h");
        for (std::uint64_t i = b.heap_index(); i >= 1; i /= 2) s.insert(i);
    }
    SpannedForest f;
    f.vertices.assign(s.begin(), s.end()); // heap order is breadth-first
    f.kids.assign(f.vertices.size(), {-1, -1});
    f.parent.assign(f.vertices.size(), -1);
    std::unordered_map<std::uint64_t, int> pos;
    for (std::size_t i = 0; i < f.vertices.size(); ++i) pos.emplace(f.vertices[i], static_cast<int>(i));
    for (std::size_t i = 1; i < f.vertices.size(); ++i) {
        const int p = pos.at(f.vertices[i] / 2);
        f.parent[i] = p;
        f.kids[static_cast<std::size_t>(p)][f.vertices[i] & 1U] = static_cast<int>(i);
    }
    return f;
}

} // namespace detail

// Number of distinct restricted assignments on the spanned forest.
inline BigInt count_restricted(const DirTree& t, std::uint64_t h, const std::vector<BitString>& relevant) {
    if (relevant.empty()) return 1;
    const auto f = detail::spanned_forest(h, relevant);
    // a[pos][node] for the subtree of the forest at pos mapped to node
    std::function<BigInt(int, int)> count = [&](int p, int node) -> BigInt {
        BigInt r = 1;
        for (int k : f.kids[static_cast<std::size_t>(p)]) {
            if (k < 0) continue;
            BigInt s = 0;
            for (int c : t.node(node).child)
                if (c != DirTree::npos) s += count(k, c);
            r *= s;
        }
        return r;
    };
    return count(0, t.root());
}

// Visits every assignment of child choices on the forest spanned by the
// relevant leaves (plus ancestors) with its exact probability under
// independent uniform child choice. Throws cap_exceeded before visiting if
// the number of assignments exceeds cap.
inline void enumerate_restricted(const DirTree& t, std::uint64_t h, const std::vector<BitString>& relevant,
                                 const std::function<void(const RestrictedAssignment&, const Dyadic&)>& visit,
                                 double cap = 1048576.0) {
    for (int leaf : t.leaves())
        if (t.id(leaf).height() < h) throw invalid_input("target tree is missing heights below " + t.id(leaf).str());
    RestrictedAssignment a;
    if (relevant.empty()) {
        a.vertices = {1};
        a.images = {t.root()};
        visit(a, Dyadic(1));
        return;
    }
    const BigInt total = count_restricted(t, h, relevant);
    if (total > BigInt(static_cast<long long>(cap)))
        throw cap_exceeded("restricted enumeration exceeds cap", total.convert_to<double>(), cap);

    const auto f = detail::spanned_forest(h, relevant);
    a.vertices = f.vertices;
    a.images.assign(f.vertices.size(), DirTree::npos);
    a.images[0] = t.root();
    std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t halvings) {
        if (i == f.vertices.size()) {
            visit(a, Dyadic(BigInt(1), halvings));
            return;
        }
        const auto& parent = t.node(a.images[static_cast<std::size_t>(f.parent[i])]);
        if (parent.splits()) {
            for (int c : parent.child) {
                a.images[i] = c;
                rec(i + 1, halvings + 1);
            }
        } else {
            a.images[i] = parent.child[parent.child[0] != DirTree::npos ? 0 : 1];
            rec(i + 1, halvings);
        }
    };
    rec(1, 0);
}

} // namespace kakeya
