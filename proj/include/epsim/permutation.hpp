#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace epsim {

// Bijection on {1..degree}; images stored 1-based (images[k-1] = image of k).
class Permutation {
public:
    Permutation() = default;
    static Permutation identity(int degree);
    static Permutation from_images(std::vector<int> images_1based);
    // Product of the listed disjoint cycles, unlisted points fixed.
    // Throws CycleError on overlapping or out-of-range entries.
    static Permutation from_cycles(int degree, const std::vector<std::vector<int>>& cycles);
    // Parses "(1,5)(2,6)(3,4)(7,8)"; "()" is the identity.
    static Permutation parse_cycles(int degree, const std::string& text);

    int degree() const { return static_cast<int>(images_.size()); }
    int apply(int k) const { return images_[k - 1]; }  // 1-based
    const std::vector<int>& images() const { return images_; }

    Permutation inverse() const;
    bool is_identity() const;
    bool is_even() const;

    // Canonical disjoint cycles (fixed points omitted, each cycle led by its
    // smallest element, cycles ordered by leading element).
    std::vector<std::vector<int>> cycles() const;
    std::string cycle_notation() const;

    bool operator==(const Permutation& rhs) const { return images_ == rhs.images_; }
    bool operator<(const Permutation& rhs) const { return images_ < rhs.images_; }

private:
    std::vector<int> images_;
};

// (a o b)(k) = a(b(k)): the rightmost factor acts first.
Permutation compose(const Permutation& a, const Permutation& b);

struct GroupClosure {
    std::vector<Permutation> elements;  // sorted, deterministic
    std::size_t order = 0;
    bool is_abelian = false;
};

// Breadth-first closure under composition; generators must share a degree.
// Throws SizeLimitError past `cap` elements.
GroupClosure closure(const std::vector<Permutation>& generators, std::size_t cap = 1000000);

// For each ordered pair (from, to), the 1-based indices of generators mapping
// from -> to. table[from-1][to-1] is an increasing list.
using TransferTable = std::vector<std::vector<std::vector<int>>>;
TransferTable transfer_table(const std::vector<Permutation>& generators);

// Normal subgroups of the closure with the requested order, found by testing
// unions of conjugacy classes. Exhaustive for small class counts.
std::vector<std::vector<Permutation>> find_normal_subgroups(const GroupClosure& group,
                                                            std::size_t order);

}  // namespace epsim
