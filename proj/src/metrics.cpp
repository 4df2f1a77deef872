#include "kerneltv/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ktv {

namespace {

MetricInner raw_metric(const Image& img, int x, int y) {
    MetricInner m;
    const int xp = reflect(x + 1, img.width());
    const int xm = reflect(x - 1, img.width());
    const int yp = reflect(y + 1, img.height());
    const int ym = reflect(y - 1, img.height());
    for (int c = 0; c < img.channels(); ++c) {
        const double dx = 0.5 * (img.at(xp, y, c) - img.at(xm, y, c));
        const double dy = 0.5 * (img.at(x, yp, c) - img.at(x, ym, c));
        m.gxx += dx * dx;
        m.gyy += dy * dy;
        m.gxy += dx * dy;
    }
    return m;
}

MetricInner kernel_metric(const Image& img, const KernelSpec& k, int x, int y) {
    GradSample s;
    s.a = s.b = img.pixel(x, y);
    s.dax.channels = s.day.channels = img.channels();
    const int xp = reflect(x + 1, img.width());
    const int xm = reflect(x - 1, img.width());
    const int yp = reflect(y + 1, img.height());
    const int ym = reflect(y - 1, img.height());
    for (int c = 0; c < img.channels(); ++c) {
        s.dax[c] = 0.5 * (img.at(xp, y, c) - img.at(xm, y, c));
        s.day[c] = 0.5 * (img.at(x, yp, c) - img.at(x, ym, c));
    }
    return metric_inner(k, s);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

double psnr(const Image& reference, const Image& test) {
    if (!reference.same_shape(test))
        throw std::invalid_argument("psnr: image shapes differ");
    double mse = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double d = reference.data()[i] - test.data()[i];
        mse += d * d;
    }
    mse /= static_cast<double>(reference.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double surface_area(const Image& img, const KernelSpec* k) {
    double area = 0.0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const MetricInner m = k ? kernel_metric(img, *k, x, y) : raw_metric(img, x, y);
            const double det = (1.0 + m.gxx) * (1.0 + m.gyy) - m.gxy * m.gxy;
            area += std::sqrt(std::max(det, 0.0));
        }
    }
    return area;
}

AreaReport area_ratio(const Image& img, const KernelSpec& k) {
    AreaReport r;
    r.area_original = surface_area(img, nullptr);
    r.area_mapped = surface_area(img, &k);
    r.ratio = r.area_mapped / r.area_original;
    return r;
}

ParamSelection select_kernel_param(const Image& img, KernelFamily family,
                                   std::span<const double> grid) {
    if (grid.empty())
        throw std::invalid_argument("select_kernel_param: empty parameter grid");
    ParamSelection sel;
    double best_dist = std::numeric_limits<double>::infinity();
    for (double param : grid) {
        const KernelSpec k = family == KernelFamily::gaussian
                                 ? KernelSpec::gaussian(param)
                                 : KernelSpec::polynomial(param);
        SweepPoint pt{param, area_ratio(img, k)};
        const double dist = std::abs(pt.report.ratio - 1.0);
        if (dist < best_dist || (dist == best_dist && param < sel.chosen)) {
            best_dist = dist;
            sel.chosen = param;
        }
        sel.sweep.push_back(pt);
    }
    return sel;
}

std::map<std::string, double> external_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scores CSV: cannot open " + path);
    std::map<std::string, double> scores;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (lineno == 1 && lower(stripped) == "id,score") continue;
        const std::size_t comma = stripped.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("scores CSV: parse error at line " +
                                     std::to_string(lineno) + ": missing comma");
        const std::string id = trim(stripped.substr(0, comma));
        const std::string score_str = trim(stripped.substr(comma + 1));
        if (id.empty())
            throw std::runtime_error("scores CSV: parse error at line " +
                                     std::to_string(lineno) + ": empty id");
        std::size_t used = 0;
        double score = 0.0;
        try {
            score = std::stod(score_str, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("scores CSV: parse error at line " +
                                     std::to_string(lineno) + ": bad score '" +
                                     score_str + "'");
        }
        if (used != score_str.size())
            throw std::runtime_error("scores CSV: parse error at line " +
                                     std::to_string(lineno) + ": bad score '" +
                                     score_str + "'");
        scores[id] = score;
    }
    return scores;
}

} // namespace ktv
