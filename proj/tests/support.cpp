#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "finlstm/rng.hpp"

namespace finlstm::testing {

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
    }
    return worst;
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           bitwise_equal(a.values(), b.values());
}

double identity_residual(const Matrix& u) {
    const std::size_t n = u.cols();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < u.rows(); ++k) dot += u(k, i) * u(k, j);
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

double l2_norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

double spectral_norm(const Matrix& u, std::size_t iterations) {
    Rng rng(12345);
    std::vector<double> v(u.cols());
    for (double& x : v) x = rng.next_gaussian();
    const double n0 = l2_norm(v);
    for (double& x : v) x /= n0;

    double sigma = 0.0;
    for (std::size_t it = 0; it < iterations; ++it) {
        // w = U^T (U v); sigma^2 approaches the top eigenvalue of U^T U
        std::vector<double> uv(u.rows(), 0.0);
        matvec_add(u, v, uv);
        std::vector<double> w(u.cols(), 0.0);
        matvec_transposed_add(u, uv, w);
        const double norm = l2_norm(w);
        if (norm == 0.0) return 0.0;
        for (double& x : w) x /= norm;
        v = std::move(w);
        sigma = std::sqrt(norm);
    }
    return sigma;
}

double model_loss(const Model& m, const Matrix& x, const Matrix& targets) {
    return mse_loss(model_forward(m, x).predictions, targets).loss;
}

std::vector<std::vector<double>> fd_model_gradients(Model m, const Matrix& x,
                                                    const Matrix& targets, double step) {
    std::vector<std::vector<double>> grads;
    for (auto& ref : tensor_refs(m)) {
        std::vector<double> g(ref.values.size());
        for (std::size_t k = 0; k < ref.values.size(); ++k) {
            const double saved = ref.values[k];
            ref.values[k] = saved + step;
            const double up = model_loss(m, x, targets);
            ref.values[k] = saved - step;
            const double down = model_loss(m, x, targets);
            ref.values[k] = saved;
            g[k] = (up - down) / (2.0 * step);
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

double max_gradient_rel_err(const Model& m, const Matrix& x, const Matrix& targets,
                            double step) {
    const GradientResult analytic = model_gradients(m, x, targets);
    const auto numeric = fd_model_gradients(m, x, targets, step);
    const auto refs = tensor_refs(analytic.grads);
    double worst = 0.0;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        for (std::size_t k = 0; k < refs[i].values.size(); ++k) {
            worst = std::max(worst, rel_err(refs[i].values[k], numeric[i][k]));
        }
    }
    return worst;
}

Date next_calendar_day(Date d) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
    const int month_days = (d.month == 2 && leap) ? 29 : kDays[d.month - 1];
    if (d.day < month_days) return {d.year, d.month, d.day + 1};
    if (d.month < 12) return {d.year, d.month + 1, 1};
    return {d.year + 1, 1, 1};
}

std::vector<OhlcvRecord> sine_records(std::size_t days, double amplitude, double period,
                                      Date start) {
    std::vector<OhlcvRecord> records;
    records.reserve(days);
    Date date = start;
    constexpr double kTau = 6.283185307179586;
    for (std::size_t t = 0; t < days; ++t) {
        const double phase = kTau * static_cast<double>(t) / period;
        OhlcvRecord rec;
        rec.date = date;
        rec.open = 100.0 * (1.0 + amplitude * std::sin(phase - 0.35));
        rec.close = 100.0 * (1.0 + amplitude * std::sin(phase));
        const double hi = std::max(rec.open, rec.close);
        const double lo = std::min(rec.open, rec.close);
        rec.high = hi * (1.0 + 0.2 * amplitude * (1.0 + std::sin(phase + 0.9)));
        rec.low = lo * (1.0 - 0.2 * amplitude * (1.0 + std::cos(phase + 0.4)));
        rec.volume = 1e6 * (1.0 + 0.5 * std::sin(kTau * static_cast<double>(t) / 7.0 + 0.2));
        records.push_back(rec);
        date = next_calendar_day(date);
    }
    return records;
}

std::vector<OhlcvRecord> constant_records(std::size_t days, double price, double volume,
                                          Date start) {
    std::vector<OhlcvRecord> records;
    records.reserve(days);
    Date date = start;
    for (std::size_t t = 0; t < days; ++t) {
        records.push_back({date, price, price, price, price, volume});
        date = next_calendar_day(date);
    }
    return records;
}

std::string to_csv(const std::vector<OhlcvRecord>& records, bool adj_close) {
    std::ostringstream out;
    out << (adj_close ? "Date,Open,High,Low,Close,Adj Close,Volume"
                      : "Date,Open,High,Low,Close,Volume")
        << '\n';
    char buf[64];
    for (const OhlcvRecord& r : records) {
        out << r.date.to_string();
        for (double v : {r.open, r.high, r.low, r.close}) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            out << buf;
        }
        if (adj_close) {
            std::snprintf(buf, sizeof(buf), ",%.17g", r.close);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.17g", r.volume);
        out << buf << '\n';
    }
    return out.str();
}

}  // namespace finlstm::testing
