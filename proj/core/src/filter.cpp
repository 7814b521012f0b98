#include "mibci/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mibci/error.hpp"

namespace mibci {
namespace {

using cplx = std::complex<double>;

struct Zpk {
    std::vector<cplx> zeros;
    std::vector<cplx> poles;
    double gain = 1.0;
};

Zpk butter_prototype(int order) {
    Zpk p;
    for (int k = 0; k < order; ++k) {
        const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
        p.poles.push_back(std::polar(1.0, theta));
    }
    return p;
}

// Analog frequency for a digital one, with the bilinear transform at fs = 2.
double prewarp(double freq_hz, double fs_hz) {
    return 4.0 * std::tan(std::numbers::pi * freq_hz / fs_hz);
}

Zpk lowpass_transform(Zpk p, double wo) {
    const auto degree = static_cast<int>(p.poles.size() - p.zeros.size());
    for (auto& z : p.zeros) z *= wo;
    for (auto& q : p.poles) q *= wo;
    p.gain *= std::pow(wo, degree);
    return p;
}

Zpk bandpass_transform(const Zpk& p, double wo, double bw) {
    const auto degree = static_cast<int>(p.poles.size() - p.zeros.size());
    Zpk out;
    auto split = [&](const std::vector<cplx>& roots, std::vector<cplx>& dst) {
        for (const cplx& r : roots) {
            const cplx lp = r * (bw / 2.0);
            const cplx disc = std::sqrt(lp * lp - wo * wo);
            dst.push_back(lp + disc);
            dst.push_back(lp - disc);
        }
    };
    split(p.zeros, out.zeros);
    split(p.poles, out.poles);
    for (int i = 0; i < degree; ++i) out.zeros.emplace_back(0.0, 0.0);
    out.gain = p.gain * std::pow(bw, degree);
    return out;
}

Zpk bilinear(const Zpk& p) {
    constexpr double fs2 = 4.0;
    Zpk out;
    cplx num(1.0, 0.0);
    cplx den(1.0, 0.0);
    for (const cplx& z : p.zeros) {
        out.zeros.push_back((fs2 + z) / (fs2 - z));
        num *= fs2 - z;
    }
    for (const cplx& q : p.poles) {
        out.poles.push_back((fs2 + q) / (fs2 - q));
        den *= fs2 - q;
    }
    // Zeros at infinity map to Nyquist.
    while (out.zeros.size() < out.poles.size()) out.zeros.emplace_back(-1.0, 0.0);
    out.gain = p.gain * (num / den).real();
    return out;
}

// Complex roots are taken as conjugate pairs (one representative with
// positive imaginary part); real roots are paired in sorted order.
std::vector<std::vector<cplx>> group_roots(const std::vector<cplx>& roots) {
    constexpr double tol = 1e-10;
    std::vector<std::vector<cplx>> groups;
    std::vector<cplx> reals;
    for (const cplx& r : roots) {
        if (std::abs(r.imag()) <= tol) {
            reals.emplace_back(r.real(), 0.0);
        } else if (r.imag() > 0) {
            groups.push_back({r, std::conj(r)});
        }
    }
    std::sort(reals.begin(), reals.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    for (std::size_t i = 0; i < reals.size(); i += 2) {
        if (i + 1 < reals.size()) {
            groups.push_back({reals[i], reals[i + 1]});
        } else {
            groups.push_back({reals[i]});
        }
    }
    return groups;
}

SosFilter to_sos(const Zpk& zpk) {
    const auto pole_groups = group_roots(zpk.poles);

    // Real zeros at +1 and -1 come from band-pass designs; giving each section
    // one of each keeps section gains balanced.
    std::vector<cplx> at_dc, others;
    for (const cplx& z : zpk.zeros) {
        (std::abs(z - cplx(1.0, 0.0)) < 1e-10 ? at_dc : others).push_back(z);
    }
    std::vector<cplx> zeros;
    while (!at_dc.empty() || !others.empty()) {
        if (!at_dc.empty()) { zeros.push_back(at_dc.back()); at_dc.pop_back(); }
        if (!others.empty()) { zeros.push_back(others.back()); others.pop_back(); }
    }

    std::vector<Biquad> sections;
    std::size_t zi = 0;
    for (const auto& pg : pole_groups) {
        Biquad s;
        if (pg.size() == 2) {
            s.a1 = -(pg[0] + pg[1]).real();
            s.a2 = (pg[0] * pg[1]).real();
        } else {
            s.a1 = -pg[0].real();
        }
        const std::size_t take = std::min(pg.size(), zeros.size() - zi);
        if (take == 2) {
            s.b1 = -(zeros[zi] + zeros[zi + 1]).real();
            s.b2 = (zeros[zi] * zeros[zi + 1]).real();
        } else if (take == 1) {
            s.b1 = -zeros[zi].real();
        }
        zi += take;
        sections.push_back(s);
    }
    Biquad& first = sections.front();
    first.b0 *= zpk.gain;
    first.b1 *= zpk.gain;
    first.b2 *= zpk.gain;
    return SosFilter(std::move(sections), static_cast<int>(zpk.poles.size()));
}

void check_order(int order) {
    if (order < 1 || order > 12) throw InvalidArgument("filter order must be in [1, 12]");
}

}  // namespace

std::complex<double> SosFilter::response(double freq_hz, double fs_hz) const {
    const cplx z1 = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / fs_hz);
    const cplx z2 = z1 * z1;
    cplx h(1.0, 0.0);
    for (const Biquad& s : sections_) {
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    }
    return h;
}

void SosFilter::filter(std::span<const double> x, std::span<double> y) const {
    if (x.empty()) return;
    if (y.data() != x.data()) std::copy(x.begin(), x.end(), y.begin());
    // Steady-state initial conditions for a step of height x[0]; each section
    // sees the previous sections' DC gain.
    double scale = x[0];
    for (const Biquad& s : sections_) {
        const double g = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
        double z1 = (g - s.b0) * scale;
        double z2 = (s.b2 - s.a2 * g) * scale;
        for (double& v : y) {
            const double in = v;
            const double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
        scale *= g;
    }
}

void SosFilter::filtfilt(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = x.size();
    const std::size_t pad = pad_length();
    if (n <= pad) {
        throw InvalidArgument("signal of " + std::to_string(n) +
                              " samples is too short for zero-phase filtering (needs > " +
                              std::to_string(pad) + ")");
    }
    std::vector<double> ext(n + 2 * pad);
    const double first = x[0];
    const double last = x[n - 1];
    for (std::size_t i = 0; i < pad; ++i) {
        ext[i] = 2.0 * first - x[pad - i];
        ext[pad + n + i] = 2.0 * last - x[n - 2 - i];
    }
    std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));

    filter(ext, ext);
    std::reverse(ext.begin(), ext.end());
    filter(ext, ext);
    std::reverse(ext.begin(), ext.end());
    std::copy_n(ext.begin() + static_cast<std::ptrdiff_t>(pad), n, y.begin());
}

SosFilter butter_lowpass(int order, double cutoff_hz, double fs_hz) {
    check_order(order);
    if (!(cutoff_hz > 0.0 && cutoff_hz < fs_hz / 2.0)) {
        throw InvalidArgument("low-pass cutoff must lie in (0, fs/2)");
    }
    return to_sos(bilinear(lowpass_transform(butter_prototype(order), prewarp(cutoff_hz, fs_hz))));
}

SosFilter butter_bandpass(int order, double low_hz, double high_hz, double fs_hz) {
    check_order(order);
    if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < fs_hz / 2.0)) {
        throw InvalidArgument("band must satisfy 0 < low < high < fs/2");
    }
    const double wl = prewarp(low_hz, fs_hz);
    const double wh = prewarp(high_hz, fs_hz);
    return to_sos(bilinear(bandpass_transform(butter_prototype(order), std::sqrt(wl * wh), wh - wl)));
}

}  // namespace mibci
