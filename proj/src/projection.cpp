#include "abw/projection.hpp"

#include "abw/errors.hpp"

#include <cmath>

namespace abw {

std::vector<double> isotonic(const std::vector<double>& values)
{
    const std::size_t n = values.size();
    // Each block keeps its sum, size and first index.
    std::vector<double> sum;
    std::vector<std::size_t> count;
    std::vector<std::size_t> start;
    sum.reserve(n);
    count.reserve(n);
    start.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(values[i])) {
            throw DomainError("isotonic projection needs finite input");
        }
        sum.push_back(values[i]);
        count.push_back(1);
        start.push_back(i);
        while (sum.size() > 1) {
            const std::size_t b = sum.size() - 1;
            const double mean_b = sum[b] / static_cast<double>(count[b]);
            const double mean_a = sum[b - 1] / static_cast<double>(count[b - 1]);
            if (mean_a <= mean_b) {
                break;
            }
            sum[b - 1] += sum[b];
            count[b - 1] += count[b];
            sum.pop_back();
            count.pop_back();
            start.pop_back();
        }
    }

    std::vector<double> out(n);
    for (std::size_t b = 0; b < sum.size(); ++b) {
        const double mean = (count[b] == 1) ? sum[b] : sum[b] / static_cast<double>(count[b]);
        for (std::size_t k = 0; k < count[b]; ++k) {
            out[start[b] + k] = mean;
        }
    }
    return out;
}

std::vector<double> antitonic(const std::vector<double>& values)
{
    std::vector<double> neg(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        neg[i] = -values[i];
    }
    std::vector<double> out = isotonic(neg);
    for (double& v : out) {
        v = -v;
    }
    return out;
}

QuantileGrid project_through(const std::function<double(double)>& g_inv,
                             const std::vector<double>& values)
{
    std::vector<double> out = isotonic(values);
    for (double& v : out) {
        v = g_inv(v);
    }
    return QuantileGrid(std::move(out));
}

}  // namespace abw
