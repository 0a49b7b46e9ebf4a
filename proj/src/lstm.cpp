#include <algorithm>
#include <cmath>

#include "trendscope/trends.h"

namespace trendscope::trends {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Layout {
    std::size_t H;
    std::size_t wx() const { return 0; }
    std::size_t wh() const { return 4 * H; }
    std::size_t b() const { return 4 * H + 4 * H * H; }
    std::size_t wy() const { return 8 * H + 4 * H * H; }
    std::size_t by() const { return 9 * H + 4 * H * H; }
};

struct Step {
    double x = 0.0;
    std::vector<double> i, f, o, g, c, tanh_c;
    std::vector<double> h_prev, c_prev;
};

// Runs the cell over the window; fills `trace` when given. Returns the head output.
double forward(const std::vector<double>& p, std::size_t H, const std::vector<double>& xs, std::vector<Step>* trace) {
    const Layout L{H};
    std::vector<double> h(H, 0.0);
    std::vector<double> c(H, 0.0);
    std::vector<double> z(4 * H);
    if (trace) trace->resize(xs.size());
    std::vector<double> hn(H);
    std::vector<double> cn(H);
    for (std::size_t t = 0; t < xs.size(); ++t) {
        for (std::size_t r = 0; r < 4 * H; ++r) {
            double s = p[L.wx() + r] * xs[t] + p[L.b() + r];
            const double* row = &p[L.wh() + r * H];
            for (std::size_t j = 0; j < H; ++j) s += row[j] * h[j];
            z[r] = s;
        }
        Step* st = trace ? &(*trace)[t] : nullptr;
        if (st) {
            st->x = xs[t];
            st->h_prev = h;
            st->c_prev = c;
            st->i.resize(H);
            st->f.resize(H);
            st->o.resize(H);
            st->g.resize(H);
            st->c.resize(H);
            st->tanh_c.resize(H);
        }
        for (std::size_t u = 0; u < H; ++u) {
            const double ig = sigmoid(z[u]);
            const double fg = sigmoid(z[H + u]);
            const double og = sigmoid(z[2 * H + u]);
            const double gg = std::tanh(z[3 * H + u]);
            cn[u] = fg * c[u] + ig * gg;
            const double tc = std::tanh(cn[u]);
            hn[u] = og * tc;
            if (st) {
                st->i[u] = ig;
                st->f[u] = fg;
                st->o[u] = og;
                st->g[u] = gg;
                st->c[u] = cn[u];
                st->tanh_c[u] = tc;
            }
        }
        h.swap(hn);
        c.swap(cn);
    }
    double y = p[L.by()];
    for (std::size_t u = 0; u < H; ++u) y += p[L.wy() + u] * h[u];
    return y;
}

double grad_norm(const std::vector<double>& g) {
    double s = 0.0;
    for (double v : g) s += v * v;
    return std::sqrt(s);
}

}  // namespace

double LstmModel::scale(double v) const {
    if (scale_max <= scale_min) return 0.0;
    return 2.0 * (v - scale_min) / (scale_max - scale_min) - 1.0;
}

double LstmModel::unscale(double v) const {
    if (scale_max <= scale_min) return scale_min;
    return (v + 1.0) / 2.0 * (scale_max - scale_min) + scale_min;
}

LstmModel init_lstm(const LstmConfig& config) {
    if (config.hidden < 1 || config.window < 1) fail(ErrorKind::Usage, "LSTM needs hidden >= 1 and window >= 1");
    LstmModel m;
    m.config = config;
    const std::size_t H = config.hidden;
    const Layout L{H};
    m.params.assign(LstmModel::param_count(H), 0.0);
    std::mt19937_64 rng(config.seed);
    const double a = 1.0 / std::sqrt(static_cast<double>(H));
    std::uniform_real_distribution<double> U(-a, a);
    for (std::size_t k = L.wx(); k < L.b(); ++k) m.params[k] = U(rng);
    for (std::size_t u = 0; u < H; ++u) m.params[L.b() + H + u] = 1.0;
    for (std::size_t k = L.wy(); k < L.by(); ++k) m.params[k] = U(rng);
    return m;
}

double lstm_predict(const LstmModel& model, const std::vector<double>& window) {
    return forward(model.params, model.hidden(), window, nullptr);
}

std::vector<Sample> make_windows(const std::vector<double>& series, std::size_t window) {
    std::vector<Sample> out;
    for (std::size_t s = 0; s + window < series.size(); ++s) {
        out.push_back({std::vector<double>(series.begin() + static_cast<std::ptrdiff_t>(s),
                                           series.begin() + static_cast<std::ptrdiff_t>(s + window)),
                       series[s + window]});
    }
    return out;
}

double lstm_loss_and_gradients(const LstmModel& model, const std::vector<Sample>& batch, std::vector<double>* grad,
                               double loss_scale) {
    const std::size_t H = model.hidden();
    const Layout L{H};
    const auto& p = model.params;
    if (grad) grad->assign(p.size(), 0.0);
    if (batch.empty()) return 0.0;
    const double N = static_cast<double>(batch.size());
    double loss = 0.0;
    std::vector<Step> trace;
    std::vector<double> dh(H), dc(H), dh_prev(H), dz(4 * H);
    for (const auto& s : batch) {
        const double y = forward(p, H, s.x, grad ? &trace : nullptr);
        const double err = y - s.y;
        loss += err * err;
        if (!grad) continue;
        auto& G = *grad;
        const double dy = 2.0 * loss_scale * err / N;
        const auto& last = trace.back();
        for (std::size_t u = 0; u < H; ++u) {
            const double h_last = last.o[u] * last.tanh_c[u];
            G[L.wy() + u] += dy * h_last;
            dh[u] = dy * p[L.wy() + u];
            dc[u] = 0.0;
        }
        G[L.by()] += dy;
        for (std::size_t t = trace.size(); t-- > 0;) {
            const auto& st = trace[t];
            for (std::size_t u = 0; u < H; ++u) {
                const double tc = st.tanh_c[u];
                const double d_o = dh[u] * tc;
                dc[u] += dh[u] * st.o[u] * (1.0 - tc * tc);
                const double d_i = dc[u] * st.g[u];
                const double d_g = dc[u] * st.i[u];
                const double d_f = dc[u] * st.c_prev[u];
                dc[u] *= st.f[u];
                dz[u] = d_i * st.i[u] * (1.0 - st.i[u]);
                dz[H + u] = d_f * st.f[u] * (1.0 - st.f[u]);
                dz[2 * H + u] = d_o * st.o[u] * (1.0 - st.o[u]);
                dz[3 * H + u] = d_g * (1.0 - st.g[u] * st.g[u]);
            }
            std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
            for (std::size_t r = 0; r < 4 * H; ++r) {
                G[L.wx() + r] += dz[r] * st.x;
                G[L.b() + r] += dz[r];
                const double* row = &p[L.wh() + r * H];
                double* grow = &G[L.wh() + r * H];
                for (std::size_t j = 0; j < H; ++j) {
                    grow[j] += dz[r] * st.h_prev[j];
                    dh_prev[j] += dz[r] * row[j];
                }
            }
            dh.swap(dh_prev);
        }
    }
    return loss_scale * loss / N;
}

double lstm_gradient_check(const LstmModel& model, const std::vector<Sample>& batch, double step, double floor) {
    std::vector<double> analytic;
    lstm_loss_and_gradients(model, batch, &analytic);
    LstmModel probe = model;
    double worst = 0.0;
    for (std::size_t k = 0; k < probe.params.size(); ++k) {
        const double orig = probe.params[k];
        probe.params[k] = orig + step;
        const double up = lstm_loss_and_gradients(probe, batch, nullptr);
        probe.params[k] = orig - step;
        const double down = lstm_loss_and_gradients(probe, batch, nullptr);
        probe.params[k] = orig;
        const double numeric = (up - down) / (2.0 * step);
        const double a = analytic[k];
        const double denom = std::max({std::abs(a), std::abs(numeric), floor});
        worst = std::max(worst, std::abs(a - numeric) / denom);
    }
    return worst;
}

LstmModel train_lstm(const std::vector<double>& values, const LstmConfig& config) {
    if (values.size() < config.window + 2) {
        fail(ErrorKind::Data, "LSTM needs at least window+2 = " + std::to_string(config.window + 2) + " values, got " +
                                  std::to_string(values.size()));
    }
    LstmModel m = init_lstm(config);
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    m.scale_min = *lo;
    m.scale_max = *hi;
    std::vector<double> scaled;
    scaled.reserve(values.size());
    for (double v : values) scaled.push_back(m.scale(v));
    const auto batch = make_windows(scaled, config.window);

    std::vector<double> g;
    for (std::size_t e = 0; e < config.epochs; ++e) {
        m.loss_history.push_back(lstm_loss_and_gradients(m, batch, &g));
        const double norm = grad_norm(g);
        const double k = (config.clip_norm > 0.0 && norm > config.clip_norm) ? config.clip_norm / norm : 1.0;
        for (std::size_t i = 0; i < g.size(); ++i) m.params[i] -= config.lr * k * g[i];
    }
    m.loss_history.push_back(lstm_loss_and_gradients(m, batch, nullptr));
    for (double v : m.params) {
        if (!std::isfinite(v)) fail(ErrorKind::Internal, "LSTM training diverged");
    }
    return m;
}

std::vector<double> forecast_lstm(const LstmModel& model, const std::vector<double>& history, std::size_t horizon,
                                  std::optional<std::pair<double, double>> clamp) {
    const std::size_t W = model.config.window;
    if (history.size() < W) fail(ErrorKind::Data, "LSTM forecast needs at least " + std::to_string(W) + " history values");
    std::vector<double> window;
    for (std::size_t i = history.size() - W; i < history.size(); ++i) window.push_back(model.scale(history[i]));
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const double next = lstm_predict(model, window);
        window.erase(window.begin());
        window.push_back(next);
        double v = model.unscale(next);
        if (clamp) v = std::clamp(v, clamp->first, clamp->second);
        out.push_back(v);
    }
    return out;
}

}  // namespace trendscope::trends
