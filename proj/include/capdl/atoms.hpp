#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace capdl {

using AtomId = uint32_t;
using EdgeId = uint32_t;

// Dense bitset over atom indices 0..universe-1.  O(1) membership, linear
// iteration in ascending index order.
class AtomSet {
public:
    AtomSet() = default;
    explicit AtomSet(uint32_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    static AtomSet of(uint32_t universe, std::initializer_list<AtomId> atoms) {
        AtomSet s(universe);
        for (AtomId a : atoms) s.set(a);
        return s;
    }

    uint32_t universe() const { return universe_; }

    // Grows the universe; existing membership is preserved.
    void resize_universe(uint32_t n) {
        if (n < universe_) throw std::logic_error("AtomSet universe cannot shrink");
        universe_ = n;
        words_.resize((n + 63) / 64, 0);
    }

    bool test(AtomId a) const {
        return a < universe_ && (words_[a >> 6] & (uint64_t{1} << (a & 63)));
    }
    void set(AtomId a) {
        if (a >= universe_) throw std::out_of_range("atom id beyond universe");
        words_[a >> 6] |= uint64_t{1} << (a & 63);
    }
    void reset(AtomId a) {
        if (a < universe_) words_[a >> 6] &= ~(uint64_t{1} << (a & 63));
    }

    uint32_t count() const {
        uint32_t c = 0;
        for (uint64_t w : words_) c += static_cast<uint32_t>(__builtin_popcountll(w));
        return c;
    }
    bool empty() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }

    bool is_subset_of(const AtomSet& other) const {
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t ow = i < other.words_.size() ? other.words_[i] : 0;
            if (words_[i] & ~ow) return false;
        }
        return true;
    }
    bool intersects(const AtomSet& other) const {
        size_t n = std::min(words_.size(), other.words_.size());
        for (size_t i = 0; i < n; ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }

    AtomSet& operator|=(const AtomSet& other) {
        if (other.universe_ > universe_) resize_universe(other.universe_);
        for (size_t i = 0; i < other.words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }
    AtomSet& operator&=(const AtomSet& other) {
        for (size_t i = 0; i < words_.size(); ++i)
            words_[i] &= i < other.words_.size() ? other.words_[i] : 0;
        return *this;
    }
    AtomSet& subtract(const AtomSet& other) {
        size_t n = std::min(words_.size(), other.words_.size());
        for (size_t i = 0; i < n; ++i) words_[i] &= ~other.words_[i];
        return *this;
    }

    friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
    friend AtomSet operator&(AtomSet a, const AtomSet& b) { return a &= b; }

    // Set equality; trailing universe padding is ignored.
    friend bool operator==(const AtomSet& a, const AtomSet& b) {
        size_t n = std::max(a.words_.size(), b.words_.size());
        for (size_t i = 0; i < n; ++i) {
            uint64_t aw = i < a.words_.size() ? a.words_[i] : 0;
            uint64_t bw = i < b.words_.size() ? b.words_[i] : 0;
            if (aw != bw) return false;
        }
        return true;
    }
    friend bool operator!=(const AtomSet& a, const AtomSet& b) { return !(a == b); }

    std::vector<AtomId> to_vector() const {
        std::vector<AtomId> out;
        for_each([&](AtomId a) { out.push_back(a); });
        return out;
    }

    template <typename F>
    void for_each(F f) const {
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t w = words_[i];
            while (w) {
                unsigned bit = static_cast<unsigned>(__builtin_ctzll(w));
                f(static_cast<AtomId>(i * 64 + bit));
                w &= w - 1;
            }
        }
    }

    // Canonical ordering for deterministic output: cardinality first, then
    // lexicographic on the ascending index sequence.
    int compare_canonical(const AtomSet& other) const {
        uint32_t ca = count(), cb = other.count();
        if (ca != cb) return ca < cb ? -1 : 1;
        auto va = to_vector(), vb = other.to_vector();
        if (va < vb) return -1;
        if (vb < va) return 1;
        return 0;
    }

private:
    uint32_t universe_ = 0;
    std::vector<uint64_t> words_;
};

// Bijective name <-> dense id mapping.
class Interner {
public:
    AtomId intern(const std::string& name) {
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        AtomId id = static_cast<AtomId>(names_.size());
        names_.push_back(name);
        ids_.emplace(name, id);
        return id;
    }
    bool contains(const std::string& name) const { return ids_.count(name) != 0; }
    AtomId id_of(const std::string& name) const {
        auto it = ids_.find(name);
        if (it == ids_.end()) throw std::out_of_range("unknown atom name: " + name);
        return it->second;
    }
    const std::string& name(AtomId id) const { return names_.at(id); }
    uint32_t size() const { return static_cast<uint32_t>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, AtomId> ids_;
};

}  // namespace capdl
