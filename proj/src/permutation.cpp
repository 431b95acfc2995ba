#include "epsim/permutation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "epsim/errors.hpp"

namespace epsim {

Permutation Permutation::identity(int degree) {
    Permutation p;
    p.images_.resize(degree);
    std::iota(p.images_.begin(), p.images_.end(), 1);
    return p;
}

Permutation Permutation::from_images(std::vector<int> images) {
    const int n = static_cast<int>(images.size());
    std::vector<bool> seen(n, false);
    for (int v : images) {
        if (v < 1 || v > n) throw CycleError("Permutation: image out of range");
        if (seen[v - 1]) throw CycleError("Permutation: images are not a bijection");
        seen[v - 1] = true;
    }
    Permutation p;
    p.images_ = std::move(images);
    return p;
}

Permutation Permutation::from_cycles(int degree, const std::vector<std::vector<int>>& cycles) {
    Permutation p = identity(degree);
    std::vector<bool> used(degree, false);
    for (const auto& cycle : cycles) {
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            const int from = cycle[i];
            const int to = cycle[(i + 1) % cycle.size()];
            if (from < 1 || from > degree || to < 1 || to > degree)
                throw CycleError("from_cycles: entry out of range 1..degree");
            if (used[from - 1]) throw CycleError("from_cycles: overlapping cycles");
            used[from - 1] = true;
            p.images_[from - 1] = to;
        }
    }
    return p;
}

Permutation Permutation::parse_cycles(int degree, const std::string& text) {
    std::vector<std::vector<int>> cycles;
    std::vector<int> current;
    bool in_cycle = false;
    std::string num;
    auto flush_num = [&]() {
        if (!num.empty()) {
            current.push_back(std::stoi(num));
            num.clear();
        }
    };
    for (char ch : text) {
        if (ch == '(') {
            if (in_cycle) throw CycleError("parse_cycles: nested '('");
            in_cycle = true;
            current.clear();
        } else if (ch == ')') {
            if (!in_cycle) throw CycleError("parse_cycles: unmatched ')'");
            flush_num();
            if (!current.empty()) cycles.push_back(current);
            in_cycle = false;
        } else if (ch == ',' || ch == ' ') {
            flush_num();
        } else if (ch >= '0' && ch <= '9') {
            num.push_back(ch);
        } else {
            throw CycleError(std::string("parse_cycles: unexpected character '") + ch + "'");
        }
    }
    if (in_cycle) throw CycleError("parse_cycles: unterminated cycle");
    return from_cycles(degree, cycles);
}

Permutation Permutation::inverse() const {
    Permutation p;
    p.images_.resize(images_.size());
    for (std::size_t k = 0; k < images_.size(); ++k) p.images_[images_[k] - 1] = static_cast<int>(k) + 1;
    return p;
}

bool Permutation::is_identity() const {
    for (std::size_t k = 0; k < images_.size(); ++k)
        if (images_[k] != static_cast<int>(k) + 1) return false;
    return true;
}

bool Permutation::is_even() const {
    // Parity = sum over cycles of (length - 1).
    int transpositions = 0;
    for (const auto& c : cycles()) transpositions += static_cast<int>(c.size()) - 1;
    return transpositions % 2 == 0;
}

std::vector<std::vector<int>> Permutation::cycles() const {
    const int n = degree();
    std::vector<bool> seen(n, false);
    std::vector<std::vector<int>> out;
    for (int start = 1; start <= n; ++start) {
        if (seen[start - 1] || images_[start - 1] == start) continue;
        std::vector<int> cycle;
        int k = start;
        while (!seen[k - 1]) {
            seen[k - 1] = true;
            cycle.push_back(k);
            k = images_[k - 1];
        }
        out.push_back(std::move(cycle));
    }
    return out;
}

std::string Permutation::cycle_notation() const {
    const auto cs = cycles();
    if (cs.empty()) return "()";
    std::ostringstream os;
    for (const auto& c : cs) {
        os << '(';
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) os << ',';
            os << c[i];
        }
        os << ')';
    }
    return os.str();
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw DegreeMismatchError("compose: degree mismatch");
    std::vector<int> images(a.degree());
    for (int k = 1; k <= a.degree(); ++k) images[k - 1] = a.apply(b.apply(k));
    return Permutation::from_images(std::move(images));
}

GroupClosure closure(const std::vector<Permutation>& generators, std::size_t cap) {
    if (generators.empty()) throw ConfigError("closure: need at least one generator");
    const int degree = generators.front().degree();
    for (const auto& g : generators)
        if (g.degree() != degree) throw DegreeMismatchError("closure: generator degree mismatch");

    std::vector<Permutation> gens = generators;
    for (const auto& g : generators) gens.push_back(g.inverse());

    std::set<Permutation> seen;
    std::vector<Permutation> frontier;
    seen.insert(Permutation::identity(degree));
    frontier.push_back(Permutation::identity(degree));
    while (!frontier.empty()) {
        std::vector<Permutation> next;
        for (const auto& el : frontier) {
            for (const auto& g : gens) {
                Permutation prod = compose(g, el);
                if (seen.insert(prod).second) {
                    if (seen.size() > cap)
                        throw SizeLimitError("closure: exceeded element cap " + std::to_string(cap));
                    next.push_back(std::move(prod));
                }
            }
        }
        frontier = std::move(next);
    }

    GroupClosure out;
    out.elements.assign(seen.begin(), seen.end());
    out.order = out.elements.size();
    out.is_abelian = true;
    for (std::size_t i = 0; i < generators.size() && out.is_abelian; ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j)
            if (!(compose(generators[i], generators[j]) == compose(generators[j], generators[i]))) {
                out.is_abelian = false;
                break;
            }
    return out;
}

TransferTable transfer_table(const std::vector<Permutation>& generators) {
    if (generators.empty()) return {};
    const int n = generators.front().degree();
    TransferTable table(n, std::vector<std::vector<int>>(n));
    for (std::size_t gi = 0; gi < generators.size(); ++gi)
        for (int k = 1; k <= n; ++k) {
            const int to = generators[gi].apply(k);
            if (to != k) table[k - 1][to - 1].push_back(static_cast<int>(gi) + 1);
        }
    return table;
}

std::vector<std::vector<Permutation>> find_normal_subgroups(const GroupClosure& group,
                                                            std::size_t order) {
    // Conjugacy classes; normal subgroups are unions of classes containing
    // the identity that happen to be closed under composition.
    std::map<Permutation, int> index;
    for (std::size_t i = 0; i < group.elements.size(); ++i)
        index[group.elements[i]] = static_cast<int>(i);

    std::vector<int> class_of(group.elements.size(), -1);
    std::vector<std::vector<int>> classes;
    for (std::size_t i = 0; i < group.elements.size(); ++i) {
        if (class_of[i] >= 0) continue;
        const int cid = static_cast<int>(classes.size());
        std::vector<int> members;
        for (const auto& g : group.elements) {
            const Permutation conj = compose(compose(g, group.elements[i]), g.inverse());
            const int idx = index.at(conj);
            if (class_of[idx] < 0) {
                class_of[idx] = cid;
                members.push_back(idx);
            }
        }
        classes.push_back(std::move(members));
    }

    const int idclass = class_of[index.at(Permutation::identity(group.elements.front().degree()))];
    const int ncls = static_cast<int>(classes.size());
    std::vector<std::vector<Permutation>> found;
    if (ncls > 24) return found;  // keep the subset scan bounded

    for (std::uint64_t massk = 0; massk < (1ull << ncls); ++massk) {
        if (!(massk & (1ull << idclass))) continue;
        std::size_t total = 0;
        for (int c = 0; c < ncls; ++c)
            if (massk & (1ull << c)) total += classes[c].size();
        if (total != order) continue;
        std::set<Permutation> candidate;
        for (int c = 0; c < ncls; ++c)
            if (massk & (1ull << c))
                for (int idx : classes[c]) candidate.insert(group.elements[idx]);
        bool closed = true;
        for (const auto& a : candidate) {
            for (const auto& b : candidate) {
                if (!candidate.count(compose(a, b))) {
                    closed = false;
                    break;
                }
            }
            if (!closed) break;
        }
        if (closed) found.emplace_back(candidate.begin(), candidate.end());
    }
    return found;
}

}  // namespace epsim
