#include "qev/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qev::stats {

namespace {

// Lower regularized incomplete gamma by series expansion; valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma by continued fraction; valid for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("regularized_gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, double dof) {
    if (x <= 0.0) return 1.0;
    return regularized_gamma_q(dof / 2.0, x / 2.0);
}

double binom_std_error(double p_hat, std::uint64_t n) {
    if (n == 0) return 0.0;
    const double v = p_hat * (1.0 - p_hat);
    return std::sqrt(v > 0.0 ? v / static_cast<double>(n) : 0.25 / static_cast<double>(n));
}

Chi2Result chi2_vs_expected(const std::vector<std::uint64_t>& counts,
                            const std::vector<double>& probs,
                            double min_expected) {
    if (counts.size() != probs.size() || counts.empty()) {
        throw std::invalid_argument("chi2_vs_expected: size mismatch");
    }
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    const double n = static_cast<double>(total);

    double stat = 0.0;
    int cells = 0;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double e = n * probs[i];
        if (e < min_expected) {
            pooled_obs += static_cast<double>(counts[i]);
            pooled_exp += e;
            continue;
        }
        const double d = static_cast<double>(counts[i]) - e;
        stat += d * d / e;
        ++cells;
    }
    if (pooled_exp > 0.0) {
        const double d = pooled_obs - pooled_exp;
        stat += d * d / pooled_exp;
        ++cells;
    }
    Chi2Result r;
    r.statistic = stat;
    r.dof = cells > 1 ? static_cast<double>(cells - 1) : 1.0;
    r.p_value = chi2_sf(stat, r.dof);
    return r;
}

Chi2Result chi2_uniform(const std::vector<std::uint64_t>& counts) {
    std::vector<double> probs(counts.size(), 1.0 / static_cast<double>(counts.size()));
    return chi2_vs_expected(counts, probs);
}

Chi2Result chi2_two_sample(const std::vector<std::uint64_t>& a,
                           const std::vector<std::uint64_t>& b,
                           double min_expected) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("chi2_two_sample: size mismatch");
    }
    double na = 0.0, nb = 0.0;
    for (auto c : a) na += static_cast<double>(c);
    for (auto c : b) nb += static_cast<double>(c);
    const double n = na + nb;

    double stat = 0.0;
    int cells = 0;
    double pa = 0.0, pb = 0.0, pe = 0.0; // pooled small cells
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double tot = static_cast<double>(a[i] + b[i]);
        const double ea = tot * na / n;
        const double eb = tot * nb / n;
        if (ea < min_expected || eb < min_expected) {
            pa += static_cast<double>(a[i]);
            pb += static_cast<double>(b[i]);
            pe += tot;
            continue;
        }
        const double da = static_cast<double>(a[i]) - ea;
        const double db = static_cast<double>(b[i]) - eb;
        stat += da * da / ea + db * db / eb;
        ++cells;
    }
    if (pe > 0.0) {
        const double ea = pe * na / n;
        const double eb = pe * nb / n;
        if (ea > 0.0 && eb > 0.0) {
            stat += (pa - ea) * (pa - ea) / ea + (pb - eb) * (pb - eb) / eb;
            ++cells;
        }
    }
    Chi2Result r;
    r.statistic = stat;
    r.dof = cells > 1 ? static_cast<double>(cells - 1) : 1.0;
    r.p_value = chi2_sf(stat, r.dof);
    return r;
}

} // namespace qev::stats
