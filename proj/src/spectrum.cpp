#include "zeropi/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace zeropi {

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "flux") return SweepParameter::flux;
  if (name == "ng_theta") return SweepParameter::ng_theta;
  if (name == "EJ") return SweepParameter::EJ;
  if (name == "EL") return SweepParameter::EL;
  throw DomainError("parameter", "unknown sweep parameter '" + name + "'");
}

std::string sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::flux: return "flux";
    case SweepParameter::ng_theta: return "ng_theta";
    case SweepParameter::EJ: return "EJ";
    case SweepParameter::EL: return "EL";
  }
  return "?";
}

CircuitParams apply_parameter(CircuitParams params, SweepParameter p,
                              double value, bool relative) {
  switch (p) {
    case SweepParameter::flux: params.flux = value; break;
    case SweepParameter::ng_theta: params.ng_theta = value; break;
    case SweepParameter::EJ:
      params.EJ = relative ? params.EJ * (1.0 + value) : value;
      break;
    case SweepParameter::EL:
      params.EL = relative ? params.EL * (1.0 + value) : value;
      break;
  }
  return params;
}

int LabeledSpectrum::find(int l, int n) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i].l == l && states[i].n == n) return static_cast<int>(i);
  return -1;
}

DispersionCurve sweep(const CircuitParams& params, const BasisSpec& basis,
                      SweepParameter parameter, const std::vector<double>& grid,
                      int k, const SweepOptions& options) {
  if (grid.size() < 1) throw DomainError("grid", "must be non-empty");
  for (size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw DomainError("grid", "must be strictly increasing");

  const size_t npts = grid.size();
  std::vector<EigenSolution> sols(npts);
  std::vector<char> failed(npts, 0);

  auto solve_point = [&](size_t i) {
    try {
      const CircuitParams p = apply_parameter(params, parameter, grid[i]);
      const HermitianOperator H = options.three_d ? build_h_3d(p, basis)
                                                  : build_h_2d(p, basis);
      sols[i] = lowest_eigenpairs(H, k, options.eigen);
    } catch (const EigenSolveError&) {
      failed[i] = 1;
    }
  };

  if (options.workers > 1 && npts > 1) {
    std::atomic<size_t> next{0};
    const int nthreads = std::min<size_t>(options.workers, npts);
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < npts; i = next.fetch_add(1))
          solve_point(i);
      });
    for (auto& th : pool) th.join();
  } else {
    for (size_t i = 0; i < npts; ++i) solve_point(i);
  }

  const size_t nfail = std::accumulate(failed.begin(), failed.end(), size_t{0});
  if (nfail * 10 > npts)
    throw EigenSolveError("sweep: more than 10% of grid points failed", {});

  DispersionCurve curve;
  curve.parameter = parameter;
  curve.grid = grid;
  curve.energies.resize(npts);
  curve.point_failed.assign(npts, false);
  curve.anticrossing.assign(npts, false);

  // sequential post-pass: track levels across points by eigenvector overlap
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  const EigenSolution* prev = nullptr;
  std::vector<int> prev_perm = perm;
  for (size_t i = 0; i < npts; ++i) {
    curve.point_failed[i] = failed[i] != 0;
    if (failed[i]) continue;
    std::vector<int> map(k);
    std::iota(map.begin(), map.end(), 0);
    if (prev != nullptr) {
      // greedy assignment by descending overlap with the previous point
      Eigen::MatrixXd ov = (prev->eigenvectors.adjoint() * sols[i].eigenvectors)
                               .cwiseAbs()
                               .eval()
                               .real();
      std::vector<bool> used_col(k, false);
      std::vector<std::tuple<double, int, int>> cells;
      cells.reserve(static_cast<size_t>(k) * k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) cells.emplace_back(ov(r, c), r, c);
      std::sort(cells.begin(), cells.end(),
                [](auto& a, auto& b) { return std::get<0>(a) > std::get<0>(b); });
      std::vector<int> row_to_col(k, -1);
      for (auto& [val, r, c] : cells) {
        if (row_to_col[r] >= 0 || used_col[c]) continue;
        row_to_col[r] = c;
        used_col[c] = true;
        if (val < options.track_overlap_warn) curve.anticrossing[i] = true;
      }
      for (int level = 0; level < k; ++level) map[level] = row_to_col[prev_perm[level]];
    }
    curve.energies[i].resize(k);
    for (int level = 0; level < k; ++level)
      curve.energies[i][level] = sols[i].eigenvalues(map[level]);
    prev = &sols[i];
    prev_perm = map;
  }

  // interior-point qubit-frequency derivatives from the tracked energies
  curve.d1_omega_ge.assign(npts, 0.0);
  curve.d2_omega_ge.assign(npts, 0.0);
  auto wge = [&](size_t i) {
    return constants::GHz_to_rad_per_s *
           (curve.energies[i][1] - curve.energies[i][0]);
  };
  for (size_t i = 1; i + 1 < npts; ++i) {
    if (failed[i] || failed[i - 1] || failed[i + 1] || k < 2) continue;
    const double hl = grid[i] - grid[i - 1];
    const double hr = grid[i + 1] - grid[i];
    if (std::abs(hl - hr) > 1e-12 * std::max(hl, hr)) continue;  // uneven grid
    curve.d1_omega_ge[i] = (wge(i + 1) - wge(i - 1)) / (2.0 * hr);
    curve.d2_omega_ge[i] = (wge(i + 1) - 2.0 * wge(i) + wge(i - 1)) / (hr * hr);
  }
  return curve;
}

LabeledSpectrum label_dressed(const EigenSolution& sol3d, const EigenSolution& sol2d,
                              const BasisSpec& basis, double hybridization_threshold) {
  const long d2 = basis.dim2d();
  if (sol3d.eigenvectors.rows() != d2 * basis.zeta_dim())
    throw DomainError("sol3d", "dimension does not match basis");
  if (sol2d.eigenvectors.rows() != d2)
    throw DomainError("sol2d", "dimension does not match basis");

  const int n3 = static_cast<int>(sol3d.eigenvalues.size());
  const int levels2d = static_cast<int>(sol2d.eigenvalues.size());
  const int Nz = basis.zeta_dim();

  LabeledSpectrum out;
  out.hybridization_threshold = hybridization_threshold;
  out.states.resize(n3);

  std::vector<std::vector<int>> claimed(levels2d, std::vector<int>(Nz, -1));

  for (int s = 0; s < n3; ++s) {
    // overlap(l, n) = |<psi2d_l (x) n | psi3d_s>|^2, zeta-blocked layout
    double best = -1.0;
    int best_l = -1, best_n = -1;
    for (int n = 0; n < Nz; ++n) {
      const auto block = sol3d.eigenvectors.col(s).segment(n * d2, d2);
      for (int l = 0; l < levels2d; ++l) {
        const double o = std::norm(sol2d.eigenvectors.col(l).dot(block));
        const bool better =
            o > best + 1e-12 ||
            (std::abs(o - best) <= 1e-12 &&
             (l < best_l || (l == best_l && n < best_n)));
        if (better) {
          best = o;
          best_l = l;
          best_n = n;
        }
      }
    }
    StateLabel& lab = out.states[s];
    lab.energy = sol3d.eigenvalues(s);
    lab.l = best_l;
    lab.n = best_n;
    lab.overlap = best;
    lab.hybridized = best < hybridization_threshold;
    if (!lab.hybridized) {
      if (claimed[best_l][best_n] >= 0) {
        std::ostringstream msg;
        msg << "label_dressed: states " << claimed[best_l][best_n] << " and " << s
            << " both claim (l=" << best_l << ", n=" << best_n
            << "); basis truncation too small or resonance";
        throw LabelingError(msg.str());
      }
      claimed[best_l][best_n] = s;
    }
  }
  return out;
}

DerivativeResult differentiate(const std::function<double(double)>& omega,
                               double lambda0, double step) {
  if (!(step > 0.0)) throw DomainError("step", "must be > 0");
  const double w0 = omega(lambda0);
  auto stencil = [&](double h, double& d1, double& d2) {
    const double wp = omega(lambda0 + h);
    const double wm = omega(lambda0 - h);
    if (!std::isfinite(wp) || !std::isfinite(wm) || !std::isfinite(w0))
      throw std::runtime_error("differentiate: non-finite frequency");
    d1 = (wp - wm) / (2.0 * h);
    d2 = (wp - 2.0 * w0 + wm) / (h * h);
  };
  double d1h, d2h, d1h2, d2h2;
  stencil(step, d1h, d2h);
  stencil(step / 2.0, d1h2, d2h2);
  DerivativeResult r;
  r.d1 = (4.0 * d1h2 - d1h) / 3.0;  // Richardson, O(h^4)
  r.d2 = (4.0 * d2h2 - d2h) / 3.0;
  r.err1 = std::abs(d1h2 - d1h) / 3.0;
  r.err2 = std::abs(d2h2 - d2h) / 3.0;
  return r;
}

DerivativeResult energy_derivatives(const CircuitParams& params, const BasisSpec& basis,
                                    SweepParameter parameter, double step,
                                    const EigenOptions& eigen) {
  if (step <= 0.0) {
    step = (parameter == SweepParameter::EJ || parameter == SweepParameter::EL)
               ? 1e-4
               : 1e-3;
  }
  const bool relative =
      parameter == SweepParameter::EJ || parameter == SweepParameter::EL;
  auto omega = [&](double lambda) {
    const CircuitParams p = apply_parameter(params, parameter, lambda, relative);
    const HermitianOperator H = build_h_2d(p, basis);
    const EigenSolution sol = lowest_eigenpairs(H, 2, eigen);
    return constants::GHz_to_rad_per_s * (sol.eigenvalues(1) - sol.eigenvalues(0));
  };
  const double lambda0 = relative ? 0.0
                         : parameter == SweepParameter::flux ? params.flux
                                                             : params.ng_theta;
  return differentiate(omega, lambda0, step);
}

}  // namespace zeropi
