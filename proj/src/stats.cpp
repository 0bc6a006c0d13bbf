#include "reminisce/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace reminisce {

SampleSummary summarize(std::span<const double> values) {
    SampleSummary s;
    s.n = values.size();
    if (s.n == 0) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("Welch test needs at least two samples per group");
    const auto sa = summarize(a);
    const auto sb = summarize(b);
    const double va = sa.stddev * sa.stddev / static_cast<double>(sa.n);
    const double vb = sb.stddev * sb.stddev / static_cast<double>(sb.n);
    WelchResult r;
    if (va + vb == 0.0) {
        // Both groups constant: identical means give no evidence, distinct means are certain.
        r.t = sa.mean == sb.mean ? 0.0 : std::copysign(INFINITY, sa.mean - sb.mean);
        r.df = static_cast<double>(sa.n + sb.n - 2);
        r.p_two_sided = sa.mean == sb.mean ? 1.0 : 0.0;
        return r;
    }
    r.t = (sa.mean - sb.mean) / std::sqrt(va + vb);
    r.df = (va + vb) * (va + vb) /
           (va * va / static_cast<double>(sa.n - 1) + vb * vb / static_cast<double>(sb.n - 1));
    const boost::math::students_t dist(r.df);
    r.p_two_sided = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    return r;
}

ChiSquareResult chi_square_uniform(std::span<const std::size_t> counts) {
    if (counts.size() < 2) throw std::invalid_argument("chi-square test needs at least two cells");
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    if (total == 0.0) throw std::invalid_argument("chi-square test on zero observations");
    const double expected = total / static_cast<double>(counts.size());
    ChiSquareResult r;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        r.statistic += d * d / expected;
    }
    r.df = static_cast<double>(counts.size() - 1);
    const boost::math::chi_squared dist(r.df);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

}  // namespace reminisce
