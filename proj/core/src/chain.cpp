#include "structlim/chain.hpp"

#include <algorithm>

#include "structlim/analysis.hpp"
#include "structlim/errors.hpp"
#include "structlim/eval.hpp"
#include "structlim/fragment.hpp"

namespace structlim {

Rational formula_stat_max(const Structure& a, const Structure& b,
                          std::span<const Formula> level) {
    if (level.empty()) throw validation_error("empty formula level");
    Rational best = 0;
    for (const auto& f : level) {
        int p = max_free_variable(f);
        Rational diff = abs(pairing(a, f, p) - pairing(b, f, p));
        if (diff > best) best = diff;
    }
    best.canonicalize();
    return best;
}

namespace {

void check_explicit_chain(const ExplicitChain& chain) {
    if (chain.levels.empty()) throw validation_error("explicit chain has no levels");
    std::vector<std::vector<Formula>> normalized;
    for (const auto& level : chain.levels) {
        if (level.empty()) throw validation_error("explicit chain level is empty");
        std::vector<Formula> ns;
        for (const auto& f : level) ns.push_back(normalize(f));
        normalized.push_back(std::move(ns));
    }
    for (std::size_t i = 1; i < normalized.size(); ++i) {
        for (const auto& f : normalized[i - 1]) {
            bool found = false;
            for (const auto& g : normalized[i]) {
                if (f == g) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw validation_error("explicit chain levels must be increasing: level " +
                                       std::to_string(i) + " is missing a formula of level " +
                                       std::to_string(i - 1));
            }
        }
    }
}

} // namespace

DistanceBounds dist_bounds(const Structure& a, const Structure& b,
                           const ChainCovering& chain, int n_max) {
    if (n_max < 1) throw validation_error("n_max must be >= 1");
    if (!(a.signature() == b.signature())) {
        throw validation_error("distance requires matching signatures");
    }
    if (a.domain_size() == 0 || b.domain_size() == 0) {
        throw validation_error("distance undefined on empty domain");
    }
    if (const auto* explicit_chain = std::get_if<ExplicitChain>(&chain)) {
        check_explicit_chain(*explicit_chain);
    }
    if (a == b) {
        // Every level statistic vanishes, so the infimum of max(1/n, 0) is 0.
        DistanceBounds out;
        out.lower = 0;
        out.upper = 0;
        out.exact = true;
        return out;
    }

    auto level_stat = [&](int n) -> Rational {
        if (const auto* ball_chain = std::get_if<BallChain>(&chain)) {
            int c = std::min(n, a.signature().marks());
            BallDistribution da = ball_distribution(a, n, c, ball_chain->canon);
            BallDistribution db = ball_distribution(b, n, c, ball_chain->canon);
            return tv_distance(da, db);
        }
        const auto& levels = std::get<ExplicitChain>(chain).levels;
        const auto& level = levels[std::min<std::size_t>(static_cast<std::size_t>(n),
                                                         levels.size()) - 1];
        return formula_stat_max(a, b, level);
    };

    Rational prev = -1;
    Rational last = 0;
    for (int n = 1; n <= n_max; ++n) {
        Rational d = level_stat(n);
        if (d < prev) {
            throw error("level statistic decreased from level " + std::to_string(n - 1) +
                        " to " + std::to_string(n) + " (canonicalization bug)");
        }
        prev = d;
        last = d;
        Rational inv_n(1, n);
        if (d >= inv_n) {
            // The infimum of max(1/m, D_m) is attained here: earlier levels
            // contribute 1/m (minimized at m = n-1), later levels are at
            // least D_n.
            Rational value = d;
            if (n > 1) {
                Rational prev_inv(1, n - 1);
                if (prev_inv < value) value = prev_inv;
            }
            value.canonicalize();
            DistanceBounds out;
            out.lower = value;
            out.upper = value;
            out.exact = true;
            out.crossing_level = n;
            return out;
        }
    }

    if (last == 0 && std::holds_alternative<BallChain>(chain)) {
        // All ball statistics agree through n_max; the component
        // certificate decides whether they agree at every radius. When a
        // component is too large to canonicalize the answer stays a
        // certified interval.
        const auto& bc = std::get<BallChain>(chain);
        try {
            Fo1LocalResult cert = fo1local_equiv(a, b, bc.canon);
            if (cert.equivalent) {
                DistanceBounds out;
                out.lower = 0;
                out.upper = 0;
                out.exact = true;
                return out;
            }
        } catch (const budget_error&) {
        }
    }
    DistanceBounds out;
    out.lower = last;
    out.upper = Rational(1, n_max);
    out.upper.canonicalize();
    out.exact = false;
    return out;
}

} // namespace structlim
