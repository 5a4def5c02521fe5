#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bce {

// Multiset of per-branch budget decrements. The associated recurrence
// f(k) = sum f(k - b_i) has characteristic polynomial
// x^k - sum x^(k-b_i); its largest real root is the branching factor that
// governs the O*(factor^k) running time.
struct BranchingVector {
    std::vector<int> entries;

    void validate() const {
        if (entries.empty()) throw std::invalid_argument("branching vector must be nonempty");
        for (int b : entries) {
            if (b < 1) throw std::invalid_argument("branching vector entries must be >= 1");
        }
    }

    std::string to_text() const {
        std::string s;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(entries[i]);
        }
        return s;
    }
};

inline BranchingVector parse_vector(const std::string& text) {
    BranchingVector b;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        std::string tok = text.substr(pos, next - pos);
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            b.entries.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad branching vector entry '" + tok + "'");
        }
        pos = next + 1;
    }
    b.validate();
    return b;
}

struct RootResult {
    double value;
    double tolerance;  // |value - true root| <= tolerance
};

namespace branching_detail {

// Bisection for the unique positive root of a strictly increasing g with
// g(lo) <= 0 <= g(hi).
template <class G>
RootResult bisect(G&& g, double lo, double hi, double tol) {
    if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), 0.5 * (hi - lo) + tol * 1e-3};
}

}  // namespace branching_detail

// Largest real root of the characteristic polynomial, computed as the root
// of g(a) = 1 - sum a^(-b_i), which is strictly increasing for a > 0. The
// bracket [1, t+1] always contains it since sum t^(-b_i) <= t at a = t+1.
inline RootResult branching_factor(const BranchingVector& b, double tol = 1e-9) {
    b.validate();
    auto g = [&](double a) {
        double s = 0;
        for (int e : b.entries) s += std::pow(a, -static_cast<double>(e));
        return 1.0 - s;
    };
    double t = static_cast<double>(b.entries.size());
    return branching_detail::bisect(g, 1.0, t + 1.0, tol);
}

// Branching factor of the two-loop scheme: 2^c branches decrementing by c
// plus 2^d branches decrementing by d, i.e. the largest real root of
// a^k - 2^c a^(k-c) - 2^d a^(k-d). Powers are evaluated in log space so
// large exponents cannot overflow.
inline RootResult lrr_cd(int c, int d, double tol = 1e-9) {
    if (c < 1 || d < 1) throw std::invalid_argument("lrr_cd requires c, d >= 1");
    if (c > 30 || d > 30) throw std::invalid_argument("lrr_cd: exponent too large");
    auto g = [&](double a) {
        double la = std::log(a);
        double l2 = std::log(2.0);
        return 1.0 - std::exp(c * (l2 - la)) - std::exp(d * (l2 - la));
    };
    // (2/a)^c + (2/a)^d <= 1 at a = 4 for all c, d >= 1.
    return branching_detail::bisect(g, 1.0, 4.0, tol);
}

// B is better than B2 when an injective map sends each entry of B onto a
// distinct entry of B2 it dominates (b_i >= matched entry): B is B2 with
// branches removed and decrements deepened. Better vectors never have larger
// branching factors. Greedy matching on descending entries is optimal.
inline bool is_better(const BranchingVector& b, const BranchingVector& b2) {
    b.validate();
    b2.validate();
    std::vector<int> x = b.entries, y = b2.entries;
    std::sort(x.rbegin(), x.rend());
    std::sort(y.rbegin(), y.rend());
    if (x.size() > y.size()) return false;
    std::size_t j = 0;
    for (int e : x) {
        while (j < y.size() && y[j] > e) ++j;
        if (j == y.size()) return false;
        ++j;  // match e with y[j] <= e
    }
    return true;
}

// Expands selected entries of an outer vector by sub-vectors reached after
// that branch: entry e replaced by (s_1..s_m) becomes e+s_1, .., e+s_m.
// Unreplaced entries are carried through.
inline BranchingVector compose(const BranchingVector& outer,
                               const std::map<int, BranchingVector>& replacements) {
    outer.validate();
    for (const auto& [pos, sub] : replacements) {
        if (pos < 0 || pos >= static_cast<int>(outer.entries.size()))
            throw std::invalid_argument("compose: replacement position out of range");
        sub.validate();
    }
    BranchingVector out;
    for (int i = 0; i < static_cast<int>(outer.entries.size()); ++i) {
        auto it = replacements.find(i);
        if (it == replacements.end()) {
            out.entries.push_back(outer.entries[i]);
        } else {
            for (int s : it->second.entries) out.entries.push_back(outer.entries[i] + s);
        }
    }
    return out;
}

}  // namespace bce
