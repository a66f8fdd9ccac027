#include "twist/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "twist/classical.hpp"
#include "twist/errors.hpp"
#include "twist/units.hpp"

namespace twist {

namespace fs = std::filesystem;
using nlohmann::json;
using units::c;
using units::pi;

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CsvTable::row(const std::vector<double>& values) {
  if (values.size() != header_.size()) throw DomainError("csv: row width does not match header");
  rows_.push_back(values);
}

void CsvTable::write(const fs::path& path, const Scenario& scn, const json& extra) const {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output: cannot write " + path.string());
    for (std::size_t k = 0; k < header_.size(); ++k) out << (k ? "," : "") << header_[k];
    out << "\n";
    for (const auto& r : rows_) {
      for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << format_number(r[k]);
      out << "\n";
    }
  }
  json meta;
  meta["file"] = path.filename().string();
  meta["columns"] = header_;
  meta["rows"] = rows_.size();
  meta["scenario"] = scn.echo();
  meta["scenario_hash"] = scn.hash();
  meta["version"] = kVersion;
  if (!extra.is_null()) meta["extra"] = extra;
  std::ofstream side(path.string() + ".json", std::ios::binary);
  side << meta.dump(2) << "\n";
}

namespace {

void note(const RunContext& ctx, const std::string& msg) {
  if (!ctx.quiet) std::cerr << msg << "\n";
}

double scenario_L(const Scenario& scn) {
  return scn.numerics.L > 0 ? scn.numerics.L : default_L(scn.beam);
}

MomentumAmplitude coarse_amplitude(const Scenario& scn, const LaserPulse& pulse) {
  const double L = scenario_L(scn);
  AmplitudeGrid g;
  g.span = scn.numerics.span;
  return packet_coefficients_delta(scn.beam, pulse, entry_time(pulse, L), L, g);
}

json timeline_json(const Timeline& tl) {
  return {{"L", tl.L}, {"t_in", tl.t_in}, {"t_out", tl.t_out}, {"carrier_period", tl.period}};
}

std::vector<double> snapshot_times(const Scenario& scn, const Timeline& tl) {
  std::vector<double> t;
  for (double f : scn.outputs.snapshot_fractions) t.push_back(tl.t_in + f * (tl.t_out - tl.t_in));
  return t;
}

}  // namespace

WindowPolicy window_policy(const Scenario& scn) {
  WindowPolicy w;
  w.sigmas = scn.numerics.sigmas;
  w.min_panels = scn.numerics.min_panels;
  return w;
}

Timeline make_timeline(const Scenario& scn, const LaserPulse& pulse, const MomentumAmplitude& coarse) {
  Timeline tl;
  tl.L = coarse.L;
  tl.t_in = coarse.t_in;
  const double margin = scn.numerics.margin > 0 ? scn.numerics.margin : 3 * tl.L;
  tl.t_out = exit_time(coarse, pulse, margin, window_policy(scn));
  tl.period = carrier_period(pulse, Vec3(0, 0, scn.beam.p_par));
  const int n = static_cast<int>(std::ceil((tl.t_out - tl.t_in) / tl.period * scn.numerics.samples_per_period)) + 1;
  for (int k = 0; k < n; ++k) tl.series.push_back(tl.t_in + (tl.t_out - tl.t_in) * k / (n - 1));
  return tl;
}

MomentumAmplitude resolved_amplitude(const Scenario& scn, const LaserPulse& pulse, const Timeline& tl,
                                     const std::vector<double>& times) {
  AmplitudeGrid g;
  g.span = scn.numerics.span;
  if (scn.numerics.n_p > 0) {
    g.n_p = scn.numerics.n_p;
  } else {
    auto coarse = coarse_amplitude(scn, pulse);
    g.dp = required_dp(coarse, pulse, times, window_policy(scn));
  }
  return packet_coefficients_delta(scn.beam, pulse, tl.t_in, tl.L, g);
}

std::vector<fs::path> run_field(const Scenario& scn, const RunContext& ctx) {
  LaserPulse pulse(scn.pulse);
  CsvTable t({"xi", "E", "A"});
  const int n = 4001;
  const double xm = pulse.xi_max();
  for (int k = 0; k < n; ++k) {
    const double xi = -xm + 2 * xm * k / (n - 1);
    t.row({xi, pulse.electric_field(xi), pulse.vector_potential(xi)});
  }
  fs::path p = ctx.out / "field.csv";
  t.write(p, scn, {{"xi_max", xm}, {"A0", pulse.A0()}, {"S_E", pulse.S_E()}});
  return {p};
}

std::vector<fs::path> run_current(const Scenario& scn, const RunContext& ctx) {
  const auto& b = scn.beam;
  const int m2 = b.kind == BeamSpec::Kind::Bessel ? 2 * b.l + b.s : b.m2;
  const double p = b.p(), th = b.theta0();
  const BeamSpec lo = bessel_spec((m2 - 1) / 2, 1, p, th, b.sigma);
  const BeamSpec hi = bessel_spec((m2 + 1) / 2, -1, p, th, b.sigma);
  const BeamSpec rp = rotated_spec(m2, 1, p, th, b.sigma), rm = rotated_spec(m2, -1, p, th, b.sigma);
  const double R = scn.numerics.radial_max > 0 ? scn.numerics.radial_max
                                               : std::max(default_half_width(lo), default_half_width(hi));
  const int n = scn.numerics.radial_points;
  std::vector<double> rho(n);
  for (int k = 0; k < n; ++k) rho[k] = R * k / (n - 1);
  auto pl = radial_current_profile(lo, rho), ph = radial_current_profile(hi, rho);
  auto pp = radial_current_profile(rp, rho), pm = radial_current_profile(rm, rho);
  CsvTable t({"rho", "bessel_l_lo", "bessel_l_hi", "rotated_mu_plus", "rotated_mu_minus", "sum_bessel",
              "sum_rotated"});
  double sum_dev = 0, scale = 0;
  for (int k = 0; k < n; ++k) {
    const double sb = pl.value[k] + ph.value[k], sr = pp.value[k] + pm.value[k];
    sum_dev = std::max(sum_dev, std::abs(sb - sr));
    scale = std::max(scale, std::abs(sb));
    t.row({rho[k], pl.value[k], ph.value[k], pp.value[k], pm.value[k], sb, sr});
  }
  fs::path path = ctx.out / "current.csv";
  t.write(path, scn,
          {{"m", 0.5 * m2},
           {"normalization", "4 pi^2 int dq f(q)^2 psi^+ alpha_z psi at phi = 0; overall scale arbitrary"},
           {"l_lo", (m2 - 1) / 2},
           {"l_hi", (m2 + 1) / 2},
           {"max_sum_mismatch", sum_dev},
           {"max_sum", scale}});
  return {path};
}

std::vector<fs::path> run_classical(const Scenario& scn, const RunContext& ctx) {
  LaserPulse pulse(scn.pulse);
  auto coarse = coarse_amplitude(scn, pulse);
  auto tl = make_timeline(scn, pulse, coarse);
  const auto& b = scn.beam;
  std::vector<fs::path> out;
  int idx = 0;
  for (double phi : scn.outputs.classical_phi) {
    ClassicalState st{tl.t_in, Vec3::Zero(), Vec3(b.p_perp * std::cos(phi), b.p_perp * std::sin(phi), b.p_par)};
    auto path = trajectory_exact(st, pulse, tl.series);
    CsvTable t({"t", "x", "y", "z", "px", "py", "pz"});
    for (const auto& s : path) t.row({s.t, s.x.x(), s.x.y(), s.x.z(), s.p.x(), s.p.y(), s.p.z()});
    Vec3 pf = final_momentum(st.p, pulse.S_E());
    fs::path p = ctx.out / ("classical_" + std::to_string(idx++) + ".csv");
    t.write(p, scn, {{"phi_p0", phi}, {"final_momentum_closed_form", {pf.x(), pf.y(), pf.z()}},
                     {"timeline", timeline_json(tl)}});
    out.push_back(p);
  }
  auto mean = averaged_trajectory(b.p_perp, b.p_par, pulse, 64, tl.t_in, Vec3::Zero(), tl.series);
  CsvTable t({"t", "x", "y", "z"});
  for (std::size_t k = 0; k < mean.t.size(); ++k)
    t.row({mean.t[k], mean.x[k].x(), mean.x[k].y(), mean.x[k].z()});
  fs::path p = ctx.out / "classical_mean.csv";
  t.write(p, scn, {{"n_phi", 64}, {"timeline", timeline_json(tl)}});
  out.push_back(p);
  return out;
}

std::vector<fs::path> run_snapshots(const Scenario& scn, const RunContext& ctx) {
  if (scn.outputs.snapshot_fractions.empty()) throw ConfigError("outputs.snapshot_fractions: must not be empty");
  LaserPulse pulse(scn.pulse);
  auto coarse = coarse_amplitude(scn, pulse);
  auto tl = make_timeline(scn, pulse, coarse);
  auto times = snapshot_times(scn, tl);
  auto amp = resolved_amplitude(scn, pulse, tl, times);
  note(ctx, "snapshots: N_p = " + std::to_string(amp.p.size()));
  SnapshotSettings st;
  st.window = window_policy(scn);
  st.threads = ctx.threads;
  std::vector<fs::path> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    auto box = default_box(amp, pulse, times[k], scn.numerics.box_points);
    auto g = density_snapshot(amp, pulse, times[k], box, st);
    CsvTable t({"x", "y", "value"});
    for (int ix = 0; ix < g.x.count; ++ix)
      for (int iy = 0; iy < g.y.count; ++iy) t.row({g.x.at(ix), g.y.at(iy), g.value(ix, iy)});
    fs::path p = ctx.out / ("snapshot_" + std::to_string(k) + ".csv");
    t.write(p, scn, {{"time", times[k]}, {"fraction", scn.outputs.snapshot_fractions[k]},
                     {"box", {{"x_center", box.x_center}, {"y_center", box.y_center},
                              {"half_width", box.half_width}, {"n", box.n}}},
                     {"normalization", "unit box integral"}, {"timeline", timeline_json(tl)}});
    out.push_back(p);
    note(ctx, "snapshot " + std::to_string(k) + " at t = " + format_number(times[k]));
  }
  return out;
}

std::vector<fs::path> run_series(const Scenario& scn, const RunContext& ctx) {
  LaserPulse pulse(scn.pulse);
  auto coarse = coarse_amplitude(scn, pulse);
  auto tl = make_timeline(scn, pulse, coarse);
  auto amp = resolved_amplitude(scn, pulse, tl, tl.series);
  note(ctx, "series: " + std::to_string(tl.series.size()) + " samples, N_p = " + std::to_string(amp.p.size()));
  SeriesSettings st;
  st.n_phi = scn.numerics.n_phi_slices;
  st.window = window_policy(scn);
  st.threads = ctx.threads;
  auto s = position_mean(amp, pulse, tl.series, st);
  const auto& b = scn.beam;
  auto cl = averaged_trajectory(b.p_perp, b.p_par, pulse, 64, tl.t_in, Vec3::Zero(), tl.series);
  CsvTable t({"t", "x_mean", "y_mean", "z_mean", "x_classical", "y_classical", "z_classical"});
  double peak = 0, dev = 0, ymax = 0;
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    t.row({s.t[k], s.x[k].x(), s.x[k].y(), s.x[k].z(), cl.x[k].x(), cl.x[k].y(), cl.x[k].z()});
    peak = std::max(peak, std::abs(cl.x[k].x()));
    dev = std::max(dev, std::abs(s.x[k].x() - cl.x[k].x()));
    ymax = std::max(ymax, std::abs(s.x[k].y()));
  }
  fs::path p = ctx.out / "series.csv";
  t.write(p, scn, {{"timeline", timeline_json(tl)}, {"n_p", amp.p.size()},
                   {"max_abs_x_deviation", dev}, {"peak_classical_x", peak}, {"max_abs_y", ymax}});
  return {p};
}

std::vector<fs::path> run_simulate(const Scenario& scn, const RunContext& ctx) {
  auto a = run_snapshots(scn, ctx);
  auto b = run_series(scn, ctx);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

namespace {

std::vector<double> report_row(const AngularMomentumReport& r) {
  return {r.time, r.S_E, r.J_mean, r.J2_mean, r.DJ, r.L_mean, r.S_mean, r.DJ_intrinsic, r.axis_x, r.axis_y, r.norm};
}

const std::vector<std::string> kReportColumns{"t", "S_E", "J_mean", "J2_mean", "DJ", "L_mean", "S_mean",
                                              "DJ_intrinsic", "axis_x", "axis_y", "norm"};

}  // namespace

std::vector<fs::path> run_observables(const Scenario& scn, const RunContext& ctx) {
  LaserPulse pulse(scn.pulse);
  auto amp = coarse_amplitude(scn, pulse);
  if (scn.numerics.n_p > 0) {
    AmplitudeGrid g{scn.numerics.span, scn.numerics.n_p, 0.0};
    amp = packet_coefficients_delta(scn.beam, pulse, amp.t_in, amp.L, g);
  }
  auto tl = make_timeline(scn, pulse, amp);
  CsvTable t(kReportColumns);
  for (double time : {tl.t_in, tl.t_out})
    t.row(report_row(angular_momentum_stats(amp, pulse, time, scn.numerics.n_phi_momentum, window_policy(scn))));
  fs::path p = ctx.out / "angular_momentum.csv";
  t.write(p, scn, {{"timeline", timeline_json(tl)}, {"n_p", amp.p.size()}});
  return {p};
}

std::vector<fs::path> run_sweep(const Scenario& scn, const RunContext& ctx) {
  if (scn.outputs.cep_phases.empty()) throw ConfigError("outputs.cep_phases: must not be empty for a sweep");
  SweepSettings st;
  st.L = scn.numerics.L;
  st.margin = scn.numerics.margin;
  st.grid.span = scn.numerics.span;
  if (scn.numerics.n_p > 0) st.grid.n_p = scn.numerics.n_p;
  st.n_phi = scn.numerics.n_phi_momentum;
  st.window = window_policy(scn);
  auto rows = cep_sweep(scn.beam, scn.pulse, scn.outputs.cep_phases, st);
  std::vector<std::string> cols{"phi", "t_out"};
  cols.insert(cols.end(), kReportColumns.begin() + 1, kReportColumns.end());
  CsvTable t(cols);
  for (const auto& r : rows) {
    auto v = report_row(r.report);
    v[0] = r.t_out;
    v.insert(v.begin(), r.phi);
    t.row(v);
    note(ctx, "phi = " + format_number(r.phi) + ": S_E = " + format_number(r.S_E) +
                  ", J = " + format_number(r.report.J_mean) + ", DJ = " + format_number(r.report.DJ));
  }
  fs::path p = ctx.out / "sweep.csv";
  t.write(p, scn);
  return {p};
}

Scenario preset(const std::string& fig, bool full) {
  Scenario s;
  s.name = fig + (full ? "_full" : "_desk");
  auto& n = s.numerics;
  if (!full) {
    n.sigmas = 3.5;
    n.span = 4.5;
    n.n_phi_slices = 16;
    n.min_panels = 12;
    n.samples_per_period = 8;
  }
  auto kinematics = [&](int l, double E_keV, double theta) {
    s.beam = bessel_spec(l, 1, units::kinetic_energy_to_momentum(E_keV), theta, 10.0);
  };
  auto laser = [&](double I, double omega, double a) {
    s.pulse.E_star = units::intensity_to_field(I);
    s.pulse.omega = omega;
    s.pulse.a = a;
    s.pulse.phi = 0.0;
  };
  if (fig == "fig2" || fig == "fig4") {
    laser(1.3e13, 0.242, 9);
    kinematics(3, 817.4, pi / 4);
    s.outputs.classical_phi = {0.0, pi / 2, pi / 2 - 4e-6};
  } else if (fig == "fig3") {
    laser(2.1e18, 4.84, 9);
    kinematics(3, 817.4, pi / 4);
  } else if (fig == "fig5") {
    laser(3.5e18, 0.15, 9);
    kinematics(3, 0.014, 11.3 * pi / 180);
    if (!full) {
      n.sigmas = 2.5;
      n.span = 3.5;
      n.samples_per_period = 6;
    }
  } else if (fig == "fig6") {
    laser(1.3e13, 0.242, 9);
    s.beam = rotated_spec(-1, 1, std::sqrt(200.0), pi / 4, 10.0);
    n.radial_max = 2.5;
    n.radial_points = full ? 1001 : 401;
  } else if (fig == "fig7") {
    laser(3.5e16, 0.15, 0.9);
    kinematics(3, 1.41, 11.3 * pi / 180);
    const int k = full ? 33 : 9;
    s.outputs.cep_phases.clear();
    for (int i = 0; i < k; ++i) s.outputs.cep_phases.push_back(-pi / 2 + pi * i / (k - 1));
  } else {
    throw ConfigError("reproduce: unknown figure '" + fig + "' (fig2 .. fig7)");
  }
  return s;
}

std::vector<fs::path> reproduce(const std::string& fig, bool full, const RunContext& ctx) {
  Scenario s = preset(fig, full);
  RunContext sub = ctx;
  sub.out = ctx.out / fig;
  if (fig == "fig2" || fig == "fig3") return run_snapshots(s, sub);
  if (fig == "fig4" || fig == "fig5") {
    auto a = run_series(s, sub);
    auto b = run_classical(s, sub);
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  if (fig == "fig6") return run_current(s, sub);
  auto a = run_sweep(s, sub);
  return a;
}

}  // namespace twist
