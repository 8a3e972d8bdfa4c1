#include "vjump/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include "vjump/numerics.hpp"

namespace vjump {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> crit_positions(const std::vector<CriticalPoint>& crit) {
    std::vector<double> out;
    out.reserve(crit.size());
    for (const auto& c : crit) out.push_back(c.x);
    return out;
}

struct ParsedBlock {
    std::string kind;
    std::vector<std::pair<std::string, std::string>> kv;
    std::vector<std::vector<double>> rows;
};

ParsedBlock parse_block(const std::string& text) {
    ParsedBlock blk;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        auto eq = line.find('=');
        if (eq != std::string::npos && line.find(' ') > eq) {
            blk.kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
            if (blk.kv.back().first == "kind") blk.kind = blk.kv.back().second;
            continue;
        }
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) blk.rows.push_back(std::move(row));
    }
    if (blk.kind.empty())
        throw InputError("potential definition: missing 'kind=' line");
    return blk;
}

std::string find_kv(const ParsedBlock& blk, const std::string& key,
                    const std::string& def) {
    for (const auto& [k, v] : blk.kv)
        if (k == key) return v;
    return def;
}

}  // namespace

std::vector<CriticalPoint> locate_critical_points(
    const std::function<double(double)>& u, const std::function<double(double)>& du,
    const std::function<double(double)>& d2u, double lo, double hi, int grid_n) {
    if (grid_n < 2) throw InputError("locate_critical_points: grid_n must be >= 2");
    if (!(hi > lo)) throw InputError("locate_critical_points: empty domain");

    const double h = (hi - lo) / grid_n;
    std::vector<CriticalPoint> out;
    double xa = lo, fa = du(lo);
    for (int i = 1; i <= grid_n; ++i) {
        const double xb = lo + (hi - lo) * i / grid_n;
        const double fb = du(xb);
        if (fa == 0.0 || (fa < 0.0) != (fb < 0.0)) {
            const double root = (fa == 0.0) ? xa : bisect(du, xa, xb, 1e-13);
            if (!out.empty() && root - out.back().x < 1e-9) {
                xa = xb;
                fa = fb;
                continue;  // same root seen from the adjacent panel
            }
            const double curv = d2u(root);
            if (std::fabs(curv) < 1e-8)
                throw NumericError(
                    "locate_critical_points: Morse condition violated (|U''| < 1e-8 "
                    "at a stationary point)");
            if (!out.empty() && root - out.back().x < 2.0 * h)
                throw NumericError(
                    "locate_critical_points: two stationary points within grid "
                    "resolution, refine grid_n");
            out.push_back({root, curv > 0.0 ? CritKind::Minimum : CritKind::Maximum,
                           u(root)});
        }
        xa = xb;
        fa = fb;
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].kind == out[i - 1].kind)
            throw NumericError(
                "locate_critical_points: consecutive stationary points of equal "
                "kind, refine grid_n");
    return out;
}

Potential1D Potential1D::quartic_double_well(double tilt, double lo, double hi) {
    Potential1D p;
    p.u_ = [tilt](double x) { return 0.25 * x * x * x * x - 0.5 * x * x + tilt * x; };
    p.du_ = [tilt](double x) { return x * x * x - x + tilt; };
    p.d2u_ = [](double x) { return 3.0 * x * x - 1.0; };
    p.lo_ = lo;
    p.hi_ = hi;
    p.crit_ = locate_critical_points(p.u_, p.du_, p.d2u_, lo, hi, 4096);
    p.stretch_ = crit_positions(p.crit_);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "quartic:tilt=%.17g", tilt);
    p.label_ = buf;
    return p;
}

Potential1D Potential1D::piecewise_linear(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2)
        throw InputError("piecewise_linear: need at least 2 breakpoints");
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!(pts[i].first > pts[i - 1].first))
            throw InputError("piecewise_linear: x must be strictly increasing");
        if (pts[i].second == pts[i - 1].second)
            throw InputError("piecewise_linear: flat segments are not supported");
    }
    auto data =
        std::make_shared<const std::vector<std::pair<double, double>>>(std::move(pts));
    Potential1D p;
    p.pts_ = *data;
    p.pw_linear_ = true;
    p.lo_ = p.pts_.front().first;
    p.hi_ = p.pts_.back().first;
    auto seg = [data](double x) -> std::size_t {
        const auto& v = *data;
        if (x <= v.front().first) return 0;
        if (x >= v.back().first) return v.size() - 2;
        auto it = std::upper_bound(
            v.begin(), v.end(), x,
            [](double a, const std::pair<double, double>& b) { return a < b.first; });
        return static_cast<std::size_t>(it - v.begin()) - 1;
    };
    p.u_ = [data, seg](double x) {
        const auto& v = *data;
        const auto i = seg(x);
        const double t = (x - v[i].first) / (v[i + 1].first - v[i].first);
        return v[i].second + t * (v[i + 1].second - v[i].second);
    };
    p.du_ = [data, seg](double x) {
        const auto& v = *data;
        const auto i = seg(x);
        return (v[i + 1].second - v[i].second) / (v[i + 1].first - v[i].first);
    };
    p.d2u_ = [](double) { return 0.0; };
    // critical points: interior breakpoints where the slope changes sign
    for (std::size_t i = 1; i + 1 < p.pts_.size(); ++i) {
        const double sl = p.pts_[i].second - p.pts_[i - 1].second;
        const double sr = p.pts_[i + 1].second - p.pts_[i].second;
        if (sl < 0.0 && sr > 0.0)
            p.crit_.push_back({p.pts_[i].first, CritKind::Minimum, p.pts_[i].second});
        else if (sl > 0.0 && sr < 0.0)
            p.crit_.push_back({p.pts_[i].first, CritKind::Maximum, p.pts_[i].second});
    }
    for (std::size_t i = 1; i + 1 < p.pts_.size(); ++i)
        p.stretch_.push_back(p.pts_[i].first);
    p.label_ = "piecewise_linear";
    return p;
}

Potential1D Potential1D::piecewise_cubic(std::vector<std::pair<double, double>> pts) {
    const std::size_t n = pts.size();
    if (n < 3) throw InputError("piecewise_cubic: need at least 3 control points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(pts[i].first > pts[i - 1].first))
            throw InputError("piecewise_cubic: x must be strictly increasing");

    // natural cubic spline: tridiagonal solve for knot second derivatives
    std::vector<double> x(n), y(n), m(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = pts[i].first;
        y[i] = pts[i].second;
    }
    {
        std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
            a[i] = hl / 6.0;
            b[i] = (hl + hr) / 3.0;
            c[i] = hr / 6.0;
            d[i] = (y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl;
        }
        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m[i] = (d[i] - c[i] * (i + 2 < n ? m[i + 1] : 0.0)) / b[i];
            if (i == 1) break;
        }
    }

    struct Spline {
        std::vector<double> x, y, m;
        std::size_t seg(double v) const {
            if (v <= x.front()) return 0;
            if (v >= x.back()) return x.size() - 2;
            auto it = std::upper_bound(x.begin(), x.end(), v);
            return static_cast<std::size_t>(it - x.begin()) - 1;
        }
        double val(double v) const {
            if (v < x.front()) return y.front() + der(x.front()) * (v - x.front());
            if (v > x.back()) return y.back() + der(x.back()) * (v - x.back());
            const auto i = seg(v);
            const double h = x[i + 1] - x[i], A = x[i + 1] - v, B = v - x[i];
            return m[i] * A * A * A / (6 * h) + m[i + 1] * B * B * B / (6 * h) +
                   (y[i] / h - m[i] * h / 6) * A + (y[i + 1] / h - m[i + 1] * h / 6) * B;
        }
        double der(double v) const {
            if (v < x.front()) v = x.front();
            if (v > x.back()) v = x.back();
            const auto i = seg(v);
            const double h = x[i + 1] - x[i], A = x[i + 1] - v, B = v - x[i];
            return -m[i] * A * A / (2 * h) + m[i + 1] * B * B / (2 * h) -
                   (y[i] / h - m[i] * h / 6) + (y[i + 1] / h - m[i + 1] * h / 6);
        }
        double der2(double v) const {
            if (v < x.front() || v > x.back()) return 0.0;
            const auto i = seg(v);
            const double h = x[i + 1] - x[i];
            return m[i] * (x[i + 1] - v) / h + m[i + 1] * (v - x[i]) / h;
        }
    };
    auto sp = std::make_shared<Spline>(Spline{std::move(x), std::move(y), std::move(m)});

    Potential1D p;
    p.pts_ = std::move(pts);
    p.lo_ = p.pts_.front().first;
    p.hi_ = p.pts_.back().first;
    p.u_ = [sp](double v) { return sp->val(v); };
    p.du_ = [sp](double v) { return sp->der(v); };
    p.d2u_ = [sp](double v) { return sp->der2(v); };
    p.crit_ = locate_critical_points(p.u_, p.du_, p.d2u_, p.lo_, p.hi_, 8192);
    p.stretch_ = crit_positions(p.crit_);
    p.label_ = "piecewise_cubic";
    return p;
}

Potential1D Potential1D::from_functions(Fn u, Fn du, Fn d2u, double lo, double hi,
                                        int grid_n, std::string label) {
    Potential1D p;
    p.u_ = std::move(u);
    p.du_ = std::move(du);
    p.d2u_ = std::move(d2u);
    p.lo_ = lo;
    p.hi_ = hi;
    p.crit_ = locate_critical_points(p.u_, p.du_, p.d2u_, lo, hi, grid_n);
    p.stretch_ = crit_positions(p.crit_);
    p.label_ = std::move(label);
    return p;
}

Potential1D Potential1D::from_functions_with_critical_points(
    Fn u, Fn du, Fn d2u, double lo, double hi, std::vector<CriticalPoint> crit,
    std::string label) {
    Potential1D p;
    p.u_ = std::move(u);
    p.du_ = std::move(du);
    p.d2u_ = std::move(d2u);
    p.lo_ = lo;
    p.hi_ = hi;
    p.crit_ = std::move(crit);
    p.stretch_ = crit_positions(p.crit_);
    p.label_ = std::move(label);
    return p;
}

Potential1D Potential1D::parse(const std::string& text) {
    const ParsedBlock blk = parse_block(text);
    if (blk.kind == "quartic") {
        double tilt = 0.0, lo = -3.0, hi = 3.0;
        const std::string t = find_kv(blk, "tilt", "0");
        tilt = std::stod(t);
        const std::string dom = find_kv(blk, "domain", "");
        if (!dom.empty()) {
            std::istringstream ds(dom);
            if (!(ds >> lo >> hi))
                throw InputError("potential definition: bad domain line");
        }
        return quartic_double_well(tilt, lo, hi);
    }
    if (blk.kind == "piecewise_linear" || blk.kind == "piecewise_cubic") {
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : blk.rows) {
            if (row.size() != 2)
                throw InputError("potential definition: breakpoint lines need 'x u'");
            pts.emplace_back(row[0], row[1]);
        }
        return blk.kind == "piecewise_linear" ? piecewise_linear(std::move(pts))
                                              : piecewise_cubic(std::move(pts));
    }
    throw InputError("potential definition: unknown kind '" + blk.kind + "'");
}

Potential1D Potential1D::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("potential file '" + path + "': cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    auto p = parse(ss.str());
    p.label_ = path;
    return p;
}

Potential1D Potential1D::named(const std::string& name) {
    if (name == "quartic") return quartic_double_well();
    if (name.rfind("quartic:tilt=", 0) == 0)
        return quartic_double_well(std::stod(name.substr(13)));
    if (name == "wwell")
        return piecewise_linear({{0, 1}, {1, 0}, {2, 1.5}, {3, -1}, {4, 2}});
    if (name == "quintic") {
        // double well with minima at -1 and 1 whose left minimum has vanishing
        // third derivative: U' = (x^3 - x)(1.5x + 2.5), U''(-1) = 2.  The
        // polynomial slope turns over left of -1.55, so the left tail is
        // spliced to its tangent parabola at -1.3 to keep it convex rising.
        constexpr double xs = -1.3;
        auto base = [](double x) {
            return 0.3 * x * x * x * x * x + 0.625 * x * x * x * x -
                   0.5 * x * x * x - 1.25 * x * x;
        };
        auto dbase = [](double x) { return (x * x * x - x) * (1.5 * x + 2.5); };
        auto d2base = [](double x) {
            return 6.0 * x * x * x + 7.5 * x * x - 3.0 * x - 2.5;
        };
        const double u0 = base(xs), d0 = dbase(xs), c0 = d2base(xs);
        auto u = [=](double x) {
            if (x >= xs) return base(x);
            const double h = x - xs;
            return u0 + d0 * h + 0.5 * c0 * h * h;
        };
        auto du = [=](double x) {
            if (x >= xs) return dbase(x);
            return d0 + c0 * (x - xs);
        };
        auto d2u = [=](double x) { return x >= xs ? d2base(x) : c0; };
        return from_functions(u, du, d2u, -2.5, 2.2, 4096, "quintic");
    }
    throw InputError("unknown potential name '" + name + "'");
}

// ---------------------------------------------------------------------------

PotentialTorus PotentialTorus::trig(int dim, std::vector<TrigTerm> terms,
                                    std::optional<double> grad_sup) {
    if (dim < 1) throw InputError("torus potential: dim must be >= 1");
    for (const auto& t : terms)
        if (static_cast<int>(t.wave.size()) != dim)
            throw InputError("torus potential: wave vector length != dim");

    auto shared = std::make_shared<std::vector<TrigTerm>>(std::move(terms));
    PotentialTorus p;
    p.dim_ = dim;
    p.eval_ = [shared](std::span<const double> x) {
        double s = 0.0;
        for (const auto& t : *shared) {
            double phase = 0.0;
            for (std::size_t i = 0; i < t.wave.size(); ++i) phase += t.wave[i] * x[i];
            phase *= kTwoPi;
            s += t.cos_coef * std::cos(phase) + t.sin_coef * std::sin(phase);
        }
        return s;
    };
    p.grad_ = [shared](std::span<const double> x, std::span<double> g) {
        for (auto& v : g) v = 0.0;
        for (const auto& t : *shared) {
            double phase = 0.0;
            for (std::size_t i = 0; i < t.wave.size(); ++i) phase += t.wave[i] * x[i];
            phase *= kTwoPi;
            double d = 0.0;
            if (t.cos_coef != 0.0) d -= t.cos_coef * std::sin(phase);
            if (t.sin_coef != 0.0) d += t.sin_coef * std::cos(phase);
            d *= kTwoPi;
            for (std::size_t i = 0; i < t.wave.size(); ++i)
                if (t.wave[i] != 0) g[i] += d * t.wave[i];
        }
    };
    if (grad_sup) {
        p.grad_sup_ = *grad_sup;
    } else {
        double bound = 0.0;
        for (const auto& t : *shared) {
            double k2 = 0.0;
            for (int k : t.wave) k2 += double(k) * k;
            bound += kTwoPi * std::sqrt(k2) *
                     std::hypot(t.cos_coef, t.sin_coef);
        }
        p.grad_sup_ = bound;
    }
    p.label_ = "torus_trig";
    return p;
}

PotentialTorus PotentialTorus::from_functions(int dim, EvalFn eval, GradFn grad,
                                              std::optional<double> grad_sup,
                                              std::string label) {
    if (dim < 1) throw InputError("torus potential: dim must be >= 1");
    PotentialTorus p;
    p.dim_ = dim;
    p.eval_ = std::move(eval);
    p.grad_ = std::move(grad);
    p.label_ = std::move(label);
    if (grad_sup) {
        p.grad_sup_ = *grad_sup;
        return p;
    }
    if (dim > 3)
        throw InputError(
            "torus potential: d > 3 requires an explicit grad_sup bound");
    const int n = 64;
    std::vector<double> x(dim, 0.0), g(dim, 0.0);
    std::vector<int> idx(dim, 0);
    double best = 0.0;
    while (true) {
        for (int i = 0; i < dim; ++i) x[i] = (idx[i] + 0.5) / n;
        p.grad_(x, g);
        double norm2 = 0.0;
        for (double v : g) norm2 += v * v;
        best = std::max(best, norm2);
        int i = 0;
        for (; i < dim; ++i) {
            if (++idx[i] < n) break;
            idx[i] = 0;
        }
        if (i == dim) break;
    }
    p.grad_sup_ = 1.1 * std::sqrt(best);
    return p;
}

PotentialTorus PotentialTorus::parse(const std::string& text) {
    const ParsedBlock blk = parse_block(text);
    if (blk.kind != "torus_trig")
        throw InputError("torus potential definition: kind must be torus_trig");
    const int dim = std::stoi(find_kv(blk, "dim", "0"));
    if (dim < 1) throw InputError("torus potential definition: missing dim=");
    std::vector<TrigTerm> terms;
    for (const auto& row : blk.rows) {
        if (static_cast<int>(row.size()) != 2 + dim)
            throw InputError(
                "torus potential definition: term lines need 'a b k1..kd'");
        TrigTerm t;
        t.cos_coef = row[0];
        t.sin_coef = row[1];
        for (int i = 0; i < dim; ++i)
            t.wave.push_back(static_cast<int>(std::lround(row[2 + i])));
        terms.push_back(std::move(t));
    }
    return trig(dim, std::move(terms));
}

PotentialTorus PotentialTorus::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("torus potential file '" + path + "': cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    auto p = parse(ss.str());
    p.label_ = path;
    return p;
}

PotentialTorus PotentialTorus::named(const std::string& name, int dim) {
    if (name == "cos") {
        std::vector<TrigTerm> terms;
        for (int i = 0; i < dim; ++i) {
            TrigTerm t;
            t.cos_coef = 1.0 / dim;
            t.wave.assign(dim, 0);
            t.wave[i] = 1;
            terms.push_back(std::move(t));
        }
        auto p = trig(dim, std::move(terms));
        p.label_ = "cos";
        return p;
    }
    if (name == "twowell2d") {
        if (dim != 2) throw InputError("twowell2d is a 2-torus potential");
        // two wells along x1 at depths 0.1 and -0.9, confining cosine in x2
        std::vector<TrigTerm> terms(3);
        terms[0].cos_coef = 0.4;
        terms[0].wave = {2, 0};
        terms[1].sin_coef = 0.5;
        terms[1].wave = {1, 0};
        terms[2].cos_coef = -0.25;
        terms[2].wave = {0, 1};
        auto p = trig(2, std::move(terms));
        p.label_ = "twowell2d";
        return p;
    }
    throw InputError("unknown torus potential name '" + name + "'");
}

// ---------------------------------------------------------------------------

DirectionalProfile::DirectionalProfile(const PotentialTorus& p,
                                       std::span<const double> x,
                                       std::span<const double> y)
    : pot_(&p),
      x_(x.begin(), x.end()),
      y_(y.begin(), y.end()),
      buf_(p.dim()),
      gbuf_(p.dim()) {
    if (static_cast<int>(x_.size()) != p.dim() ||
        static_cast<int>(y_.size()) != p.dim())
        throw InputError("directional_profile: dimension mismatch");
    double n2 = 0.0;
    for (double v : y_) n2 += v * v;
    if (std::fabs(std::sqrt(n2) - 1.0) > 1e-12)
        throw InputError("directional_profile: direction must be a unit vector");
}

double DirectionalProfile::value(double s) const {
    for (std::size_t i = 0; i < x_.size(); ++i) {
        double v = std::fmod(x_[i] + s * y_[i], 1.0);
        if (v < 0.0) v += 1.0;
        buf_[i] = v;
    }
    return pot_->value(buf_);
}

double DirectionalProfile::slope(double s) const {
    for (std::size_t i = 0; i < x_.size(); ++i) {
        double v = std::fmod(x_[i] + s * y_[i], 1.0);
        if (v < 0.0) v += 1.0;
        buf_[i] = v;
    }
    pot_->gradient(buf_, gbuf_);
    double d = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) d += y_[i] * gbuf_[i];
    return d;
}

DirectionalProfile directional_profile(const PotentialTorus& p,
                                       std::span<const double> x,
                                       std::span<const double> y) {
    return DirectionalProfile(p, x, y);
}

}  // namespace vjump
