#include <algorithm>
#include <cmath>

#include "trendscope/trends.h"

namespace trendscope::trends {

OlsFit fit_ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) fail(ErrorKind::Internal, "fit_ols: x and y differ in length");
    if (x.size() < 2) fail(ErrorKind::Data, "fit_ols needs at least 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) fail(ErrorKind::Data, "degenerate fit: all x values are equal");
    OlsFit f;
    f.n = x.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    // a flat series is fitted perfectly
    f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return f;
}

std::vector<double> forecast_ols(const OlsFit& fit, double last_index, std::size_t horizon,
                                 std::optional<std::pair<double, double>> clamp) {
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 1; h <= horizon; ++h) {
        double v = fit.intercept + fit.slope * (last_index + static_cast<double>(h));
        if (clamp) v = std::clamp(v, clamp->first, clamp->second);
        out.push_back(v);
    }
    return out;
}

}  // namespace trendscope::trends
