#include "emw/harness/sampling.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "emw/error.hpp"
#include "emw/surface_sources.hpp"

namespace emw::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t block_count(std::size_t rows) { return (rows + kBlockSize - 1) / kBlockSize; }

void fill_failed(double* row, std::size_t from, std::size_t to, ErrorCode code) {
  for (std::size_t c = from; c < to; ++c) row[c] = kNaN;
  row[to] = status_of(code);
}

void put_cplx(double* dst, cplx v) {
  dst[0] = v.real();
  dst[1] = v.imag();
}

void put_cvec(double* dst, const CVec3& v) {
  for (int k = 0; k < 3; ++k) put_cplx(dst + 2 * k, v[k]);
}

std::vector<std::string> field_columns(Quantity q) {
  std::vector<std::string> cols{"x", "y", "z", "t", "sigma_re", "sigma_im"};
  if (q == Quantity::Psi) {
    cols.insert(cols.end(), {"psi_re", "psi_im"});
  } else {
    cols.insert(cols.end(), {"Fx_re", "Fx_im", "Fy_re", "Fy_im", "Fz_re", "Fz_im"});
  }
  cols.push_back("status");
  return cols;
}

std::vector<std::string> source_columns(bool with_gap) {
  std::vector<std::string> cols{"q",     "phi",   "t",     "x",     "y",     "z",     "j0_re",
                                "j0_im", "jx_re", "jx_im", "jy_re", "jy_im", "jz_re", "jz_im"};
  if (with_gap) cols.push_back("gap");
  cols.push_back("status");
  return cols;
}

void require_surface(const RunConfig& cfg) {
  if (!(cfg.surface.alpha > 0.0)) {
    throw Error(ErrorCode::ConfigError,
                "[surface] alpha must be positive; the flat disk has closed-form Coulomb sources instead "
                "(coulomb_disk_sources)");
  }
  if (!(cfg.surface.q.lo >= -norm(cfg.a)) || !(cfg.surface.q.hi <= norm(cfg.a))) {
    throw Error(ErrorCode::ConfigError, "[surface] q range must lie within [-|a|, |a|]");
  }
}

struct SurfaceIndex {
  std::vector<double> q, phi, t;
  std::size_t size() const { return q.size() * phi.size() * t.size(); }
  void at(std::size_t i, double& qq, double& pp, double& tt) const {
    tt = t[i % t.size()];
    i /= t.size();
    pp = phi[i % phi.size()];
    qq = q[i / phi.size()];
  }
};

}  // namespace

double status_of(ErrorCode code) { return static_cast<double>(static_cast<int>(code) + 1); }

void parallel_blocks(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t b) {
    try {
      fn(b);
    } catch (...) {
      errors[b] = std::current_exception();
    }
  };
  if (workers == 1) {
    for (std::size_t b = 0; b < count; ++b) run(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < count; b = next++) run(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Table sample_field(const RunConfig& cfg, const SampleOptions& opts) {
  validate_config(cfg);
  const ScalarWavelet w = cfg.wavelet();
  const Polarization pol = cfg.polarization();
  const SourceConfig& src = w.config();
  const auto xs = cfg.x.values(), ys = cfg.y.values(), zs = cfg.z.values(), ts = cfg.t.values();
  const std::size_t rows = xs.size() * ys.size() * zs.size() * ts.size();
  Table table(field_columns(cfg.quantity));
  table.resize_rows(rows);
  const std::size_t status_col = table.width() - 1;
  const std::optional<int> order = w.signal().cauchy_order();
  const bool flat = w.cut().kind() == CutKind::FlatDisk;

  parallel_blocks(block_count(rows), opts.threads, [&](std::size_t block) {
    const std::size_t begin = block * kBlockSize;
    const std::size_t end = std::min(rows, begin + kBlockSize);
    const std::size_t m = end - begin;
    std::vector<double> x(m), y(m), z(m), t(m), sr(m), si(m);
    std::vector<int> failed(m, -1);
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t i = begin + k;
      t[k] = ts[i % ts.size()];
      i /= ts.size();
      z[k] = zs[i % zs.size()];
      i /= zs.size();
      y[k] = ys[i % ys.size()];
      x[k] = xs[i / ys.size()];
    }
    // sigma on the wavelet's branch
    if (flat && order) {
      kernels::principal_distance(opts.isa, src.a(), {x, y, z}, {sr, si, {}, {}});
    }
    for (std::size_t k = 0; k < m; ++k) {
      try {
        cplx s;
        if (flat && order) {
          s = {sr[k], si[k]};
        } else {
          s = complex_distance(w.cut(), {x[k], y[k], z[k]}, src);
        }
        if (std::abs(s) < w.sigma_guard()) throw Error(ErrorCode::OnBranchCircle, "sigma = 0");
        sr[k] = s.real();
        si[k] = s.imag();
      } catch (const Error& e) {
        failed[k] = static_cast<int>(e.code());
        sr[k] = 1.0;  // placeholder so the batch kernels stay finite
        si[k] = 0.0;
      }
    }

    const std::size_t nvals = cfg.quantity == Quantity::Psi ? 2 : 6;
    std::vector<std::vector<double>> vals(nvals, std::vector<double>(m));
    if (order) {
      const kernels::CauchyDrive drive{*order, src.b(), src.c(), src.a(), pol.vector()};
      if (cfg.quantity == Quantity::Psi) {
        kernels::cauchy_psi(opts.isa, drive, t, sr, si, vals[0], vals[1]);
      } else {
        kernels::cauchy_field(opts.isa, drive, {x, y, z}, t, sr, si,
                              {{vals[0], vals[2], vals[4]}, {vals[1], vals[3], vals[5]}});
      }
    } else {
      for (std::size_t k = 0; k < m; ++k) {
        if (failed[k] >= 0) continue;
        try {
          const cplx s(sr[k], si[k]);
          const Vec3 r{x[k], y[k], z[k]};
          if (cfg.quantity == Quantity::Psi) {
            const cplx v = w.signal().value(w.tau(t[k]) - s / src.c()) / s;
            vals[0][k] = v.real();
            vals[1][k] = v.imag();
          } else {
            const CVec3 u = CVec3::from_parts(r, -src.a()) / s;
            const CVec3 F = field_from_sigma(w.signal(), s, u, w.tau(t[k]), pol.vector(), src.c());
            for (int c = 0; c < 3; ++c) {
              vals[2 * c][k] = F[c].real();
              vals[2 * c + 1][k] = F[c].imag();
            }
          }
        } catch (const Error& e) {
          failed[k] = static_cast<int>(e.code());
        }
      }
    }

    for (std::size_t k = 0; k < m; ++k) {
      double* row = table.row(begin + k);
      row[0] = x[k];
      row[1] = y[k];
      row[2] = z[k];
      row[3] = t[k];
      if (failed[k] >= 0) {
        fill_failed(row, 4, status_col, static_cast<ErrorCode>(failed[k]));
        continue;
      }
      row[4] = sr[k];
      row[5] = si[k];
      for (std::size_t v = 0; v < nvals; ++v) row[6 + v] = vals[v][k];
      row[status_col] = 0.0;
    }
  });
  return table;
}

Table sample_sources(const RunConfig& cfg, const SampleOptions& opts) {
  validate_config(cfg);
  require_surface(cfg);
  const ScalarWavelet w = cfg.wavelet();
  const Polarization pol = cfg.polarization();
  SurfaceOptions so;
  so.q_min = cfg.surface_q_min();
  so.mu = cfg.surface.mu;
  so.nu = cfg.surface.nu;
  const SurfaceIndex idx{cfg.surface.q.values(), cfg.surface.phi.values(), cfg.surface.t.values()};
  const std::size_t rows = idx.size();
  Table table(source_columns(false));
  table.resize_rows(rows);
  const std::size_t status_col = table.width() - 1;

  parallel_blocks(block_count(rows), opts.threads, [&](std::size_t block) {
    const std::size_t end = std::min(rows, (block + 1) * kBlockSize);
    for (std::size_t i = block * kBlockSize; i < end; ++i) {
      double q, phi, t;
      idx.at(i, q, phi, t);
      double* row = table.row(i);
      row[0] = q;
      row[1] = phi;
      row[2] = t;
      const Vec3 pos = spheroid_point(cfg.surface.alpha, q, phi, w.config());
      row[3] = pos.x;
      row[4] = pos.y;
      row[5] = pos.z;
      try {
        const SurfaceSourceSample s = cfg.surface.mode == SourceMode::Exact
                                          ? surface_sources_exact(w, pol, q, phi, cfg.surface.alpha, t, so)
                                          : surface_sources_approx(w, pol, q, phi, cfg.surface.alpha, t, so);
        put_cplx(row + 6, s.j0);
        put_cvec(row + 8, s.j);
        row[status_col] = 0.0;
      } catch (const Error& e) {
        fill_failed(row, 6, status_col, e.code());
      }
    }
  });
  return table;
}

Table impulse_response(const RunConfig& cfg, const SampleOptions& opts) {
  validate_config(cfg);
  require_surface(cfg);
  if (cfg.c != 1.0) throw Error(ErrorCode::ConfigError, "impulse-response closed forms need c = 1");
  const SourceConfig src = cfg.source();
  const Polarization pol = cfg.polarization();
  SurfaceOptions so;
  so.q_min = cfg.surface.q_min.value_or(0.0);
  const int n = cfg.surface.bandpass_order;
  const SurfaceIndex idx{cfg.surface.q.values(), cfg.surface.phi.values(), cfg.surface.t.values()};
  const std::size_t rows = idx.size();
  Table table(source_columns(true));
  table.resize_rows(rows);
  const std::size_t status_col = table.width() - 1;

  parallel_blocks(block_count(rows), opts.threads, [&](std::size_t block) {
    const std::size_t end = std::min(rows, (block + 1) * kBlockSize);
    for (std::size_t i = block * kBlockSize; i < end; ++i) {
      double q, phi, t;
      idx.at(i, q, phi, t);
      double* row = table.row(i);
      row[0] = q;
      row[1] = phi;
      row[2] = t;
      const Vec3 pos = spheroid_point(cfg.surface.alpha, q, phi, src);
      row[3] = pos.x;
      row[4] = pos.y;
      row[5] = pos.z;
      try {
        if (n == 1) {
          const SurfaceSourceSample s = impulse_sources(src, pol, q, phi, cfg.surface.alpha, t, so);
          put_cplx(row + 6, s.j0);
          put_cvec(row + 8, s.j);
          row[14] = 0.0;
        } else {
          const BandpassResponse r = bandpass_response(n, src, pol, q, phi, cfg.surface.alpha, t, so);
          put_cplx(row + 6, r.from_impulse.j0);
          put_cvec(row + 8, r.from_impulse.j);
          row[14] = r.relative_gap;
        }
        row[status_col] = 0.0;
      } catch (const Error& e) {
        fill_failed(row, 6, status_col, e.code());
      }
    }
  });
  return table;
}

nlohmann::json config_metadata(const RunConfig& cfg) {
  using nlohmann::json;
  auto axis = [](const GridAxis& ax) { return json{{"lo", ax.lo}, {"hi", ax.hi}, {"count", ax.count}}; };
  json j;
  j["source"] = {{"a", {cfg.a.x, cfg.a.y, cfg.a.z}}, {"b", cfg.b}, {"c", cfg.c}};
  j["cut"] = {{"kind", cfg.cut_kind}, {"alpha", cfg.alpha}, {"epsilon", cfg.epsilon}, {"tol", cfg.tol.tol_cut}};
  if (cfg.signal) {
    j["signal"] = {{"kind", cfg.signal->kind}};
    if (cfg.signal->kind == "cauchy") j["signal"]["n"] = cfg.signal->n;
    else j["signal"]["csv"] = cfg.signal->csv.string();
  }
  const Vec3 re = cfg.pi.real(), im = cfg.pi.imag();
  j["polarization"] = {{"re", {re.x, re.y, re.z}}, {"im", {im.x, im.y, im.z}}, {"keep_parallel", cfg.keep_parallel}};
  j["grid"] = {{"x", axis(cfg.x)}, {"y", axis(cfg.y)}, {"z", axis(cfg.z)}, {"t", axis(cfg.t)},
               {"quantity", cfg.quantity == Quantity::Psi ? "psi" : "field"}};
  j["surface"] = {{"alpha", cfg.surface.alpha},
                  {"q", axis(cfg.surface.q)},
                  {"phi", axis(cfg.surface.phi)},
                  {"t", axis(cfg.surface.t)},
                  {"mode", cfg.surface.mode == SourceMode::Exact ? "exact" : "approx"},
                  {"mu", cfg.surface.mu},
                  {"nu", cfg.surface.nu},
                  {"n", cfg.surface.bandpass_order}};
  j["tolerances"] = {{"h", cfg.tol.h}, {"tol_cut", cfg.tol.tol_cut}};
  json codes = json::object();
  for (int c = 0; c <= static_cast<int>(ErrorCode::IoError); ++c) {
    codes[std::to_string(c + 1)] = std::string(to_string(static_cast<ErrorCode>(c)));
  }
  codes["0"] = "ok";
  j["status_codes"] = codes;
  return j;
}

}  // namespace emw::harness
