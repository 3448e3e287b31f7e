// fft.hpp - discrete Fourier transforms on the periodic box.
//
// Coefficient convention: c_K = L^{-d/2} * h^d * sum_x f(x) exp(-i K.x) with
// x the node coordinates in [-L/2, L/2)^d. With this scaling the grid
// quadrature inner product <f,g> equals the mode-space inner product
// (discrete Parseval), and the interaction bilinear form is the plain mode
// sum over |S^{d-1}| / (|K|^2 + m^2).

#pragma once

#include "srhf/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <map>
#include <vector>

namespace srhf {

using Complex = std::complex<double>;

class Fourier {
 public:
  explicit Fourier(const GridSpec& g) : grid_(g) {
    g.validate();
    const int n = g.axis_points();
    const Index total = g.total();
    ksq_.resize(total);
    center_sign_.resize(total);
    freq_.resize(n);
    for (int i = 0; i < n; ++i) freq_[i] = (i < n / 2) ? i : i - n;
    const double dk = 2.0 * M_PI / g.box;
    for (Index flat = 0; flat < total; ++flat) {
      auto idx = unflatten(g, flat);
      double k2 = 0.0;
      int msum = 0;
      for (int a = 0; a < g.dim; ++a) {
        const double k = dk * freq_[idx[a]];
        k2 += k * k;
        msum += idx[a];
      }
      ksq_[flat] = k2;
      center_sign_[flat] = (msum % 2 == 0) ? 1.0 : -1.0;
    }
    norm_ = g.cell_volume() / std::sqrt(g.volume());  // h^d * L^{-d/2}
  }

  const GridSpec& grid() const { return grid_; }

  // |K|^2 per mode, flattened in the same layout as the coefficient arrays.
  const Eigen::VectorXd& k_squared() const { return ksq_; }

  // Signed frequency index of axis position i.
  int frequency(int i) const { return freq_[i]; }

  // Wavenumber along one axis for axis position i.
  double wavenumber(int i) const { return 2.0 * M_PI / grid_.box * freq_[i]; }

  Eigen::VectorXcd forward(const Eigen::VectorXcd& values) const {
    Eigen::VectorXcd modes = dft(values, /*inverse=*/false);
    for (Index i = 0; i < modes.size(); ++i) modes[i] *= norm_ * center_sign_[i];
    return modes;
  }

  Eigen::VectorXcd forward(const Eigen::VectorXd& values) const {
    return forward(Eigen::VectorXcd(values.cast<Complex>()));
  }

  Eigen::VectorXcd inverse(const Eigen::VectorXcd& modes) const {
    Eigen::VectorXcd scaled(modes.size());
    for (Index i = 0; i < modes.size(); ++i) scaled[i] = modes[i] * (center_sign_[i] / norm_);
    return dft(scaled, /*inverse=*/true);
  }

  // Inverse transform of coefficients of a real field; Hermitian symmetry is
  // enforced by discarding the residual imaginary part.
  Eigen::VectorXd inverse_real(const Eigen::VectorXcd& modes) const {
    return inverse(modes).real();
  }

 private:
  Eigen::VectorXcd dft(const Eigen::VectorXcd& in, bool inverse) const {
    const int n = grid_.axis_points();
    const Index total = grid_.total();
    Eigen::VectorXcd data = in;
    std::vector<Complex> line(n), out(n);
    // Apply the 1d transform along each axis; lines are gathered through
    // stride arithmetic into a contiguous scratch buffer.
    for (int axis = 0; axis < grid_.dim; ++axis) {
      Index stride = 1;
      for (int a = axis + 1; a < grid_.dim; ++a) stride *= n;
      const Index lines = total / n;
      for (Index l = 0; l < lines; ++l) {
        const Index block = l / stride;
        const Index offset = l % stride;
        const Index base = block * stride * n + offset;
        for (int i = 0; i < n; ++i) line[i] = data[base + i * stride];
        if (inverse)
          fft_.inv(out, line);
        else
          fft_.fwd(out, line);
        for (int i = 0; i < n; ++i) data[base + i * stride] = out[i];
      }
    }
    return data;
  }

  GridSpec grid_;
  mutable Eigen::FFT<double> fft_;
  Eigen::VectorXd ksq_;
  Eigen::VectorXd center_sign_;
  std::vector<int> freq_;
  double norm_ = 1.0;
};

// Per-thread transform cache; plans and tables are confined to the calling
// thread, so concurrent workers never share mutable state.
inline const Fourier& fourier_for(const GridSpec& g) {
  thread_local std::map<std::tuple<int, int, int>, Fourier> cache;
  auto key = std::make_tuple(g.dim, g.box, g.pts);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, Fourier(g)).first;
  return it->second;
}

template <typename Scalar>
Eigen::VectorXcd to_fourier(const GridField<Scalar>& f) {
  return fourier_for(f.grid).forward(f.values);
}

inline GridFieldD from_fourier(const GridSpec& g, const Eigen::VectorXcd& modes) {
  return GridFieldD(g, fourier_for(g).inverse_real(modes));
}

inline GridFieldC from_fourier_complex(const GridSpec& g, const Eigen::VectorXcd& modes) {
  return GridFieldC(g, fourier_for(g).inverse(modes));
}

// Cumulative integral of the trigonometric interpolant of a periodic line:
// given n samples g_j over a period of length `period`, returns F with
// F[j] = integral of the interpolant from node 0 to node j (F[0] = 0).
// The Nyquist mode is dropped (its antiderivative has no real-sample
// representation); for smooth data its coefficient is negligible.
inline Eigen::VectorXd periodic_cumulative(const Eigen::VectorXd& samples, double period) {
  const int n = static_cast<int>(samples.size());
  Eigen::FFT<double> fft;
  std::vector<Complex> in(n), modes(n);
  for (int i = 0; i < n; ++i) in[i] = samples[i];
  fft.fwd(modes, in);
  std::vector<Complex> anti(n, Complex(0.0, 0.0));
  for (int i = 1; i < n; ++i) {
    if (i == n / 2) continue;
    const int m = (i < n / 2) ? i : i - n;
    const double k = 2.0 * M_PI * m / period;
    anti[i] = modes[i] / Complex(0.0, k);
  }
  std::vector<Complex> osc(n);
  fft.inv(osc, anti);
  const double h = period / n;
  const double mean = modes[0].real() / n;
  Eigen::VectorXd F(n);
  for (int j = 0; j < n; ++j) F[j] = mean * h * j + osc[j].real() - osc[0].real();
  return F;
}

}  // namespace srhf
