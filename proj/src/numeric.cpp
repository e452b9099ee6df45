#include "horolab/numeric.hpp"

#include <algorithm>
#include <stdexcept>

namespace horolab {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need two or more points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    double slope = sxy / sxx;
    if (intercept) *intercept = my - slope * mx;
    return slope;
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty set");
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace horolab
