#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "frpfrac/solver.hpp"

namespace frpfrac {

struct TraceRow {
  double t, u, F, max_s, max_sL, max_sM, max_alpha, theta_min, theta_max;
};

namespace detail {

/// sampling table: companion node -> active control points and basis values
struct NodeSampler {
  std::vector<std::vector<int>> cps;
  std::vector<std::vector<double>> R;

  NodeSampler() = default;
  explicit NodeSampler(const NurbsPatch& p) {
    const auto& b = p.span_breaks;
    for (std::size_t k = 0; k < b[2].size(); ++k)
      for (std::size_t j = 0; j < b[1].size(); ++j)
        for (std::size_t i = 0; i < b[0].size(); ++i) {
          auto ev = nurbs_shape(p, Vec3(b[0][i], b[1][j], b[2][k]));
          cps.push_back(ev.cps);
          R.push_back(ev.R);
        }
  }

  double scalar(int node, const Eigen::VectorXd& v) const {
    double s = 0.0;
    for (std::size_t a = 0; a < cps[node].size(); ++a) s += R[node][a] * v[cps[node][a]];
    return s;
  }
  Vec3 vector3(int node, const Eigen::VectorXd& v) const {
    Vec3 s = Vec3::Zero();
    for (std::size_t a = 0; a < cps[node].size(); ++a)
      for (int c = 0; c < 3; ++c) s[c] += R[node][a] * v[3 * cps[node][a] + c];
    return s;
  }
};

inline void write_data_array(std::ofstream& os, const std::string& name, int comps,
                             const std::vector<double>& data) {
  os << "      <DataArray type=\"Float64\" Name=\"" << name << "\" NumberOfComponents=\"" << comps
     << "\" format=\"ascii\">\n";
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.10g", data[i]);
    os << buf << ((i + 1) % 6 == 0 ? "\n" : " ");
  }
  os << "\n      </DataArray>\n";
}

}  // namespace detail

/// Writes the unstructured-grid snapshots, the load-deflection trace and the
/// fracture event log of one run.
class RunWriter {
 public:
  RunWriter(std::string directory, const MultifieldSolver& solver)
      : dir_(std::move(directory)), sampler_(solver.patch()) {
    std::filesystem::create_directories(dir_);
    csv_.open(dir_ + "/run.csv");
    if (!csv_) throw SimulationError("cannot open " + dir_ + "/run.csv");
    csv_ << "t,u,F,max_s,max_sL,max_sM,max_alpha,theta_min,theta_max\n";
    events_.open(dir_ + "/events.log");
  }

  void write_row(const TraceRow& r) {
    char buf[400];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.u, r.F,
                  r.max_s, r.max_sL, r.max_sM, r.max_alpha, r.theta_min, r.theta_max);
    csv_ << buf;
    csv_.flush();
  }

  /// crack initiation / final rupture markers, emitted at most once each
  void check_events(const TraceRow& r) {
    auto fire = [&](const std::string& name, bool cond) {
      if (cond && !fired_.count(name)) {
        fired_[name] = {r.t, r.u};
        char buf[160];
        std::snprintf(buf, sizeof(buf), "t=%.6g u=%.6g event=%s\n", r.t, r.u, name.c_str());
        events_ << buf;
        events_.flush();
      }
    };
    const double fib = std::max(r.max_sL, r.max_sM);
    fire("fiber_crack_initiation", fib >= 0.1);
    fire("fiber_rupture", fib >= 0.95);
    fire("matrix_crack_initiation", r.max_s >= 0.1);
    fire("matrix_rupture", r.max_s >= 0.95);
  }

  const std::map<std::string, std::pair<double, double>>& events() const { return fired_; }

  /// VTK unstructured-grid snapshot sampled at the companion mesh nodes
  void emit_fields(const MultifieldSolver& solver, int step_index) {
    const auto& mesh = solver.mesh();
    const auto& patch = solver.patch();
    char name[64];
    std::snprintf(name, sizeof(name), "%s/fields_%05d.vtu", dir_.c_str(), step_index);
    std::ofstream os(name);
    const int nn = mesh.node_count(), ne = int(mesh.conn.size());
    os << "<?xml version=\"1.0\"?>\n"
       << "<VTKFile type=\"UnstructuredGrid\" version=\"0.1\" byte_order=\"LittleEndian\">\n"
       << "  <UnstructuredGrid>\n"
       << "    <Piece NumberOfPoints=\"" << nn << "\" NumberOfCells=\"" << ne << "\">\n";

    os << "      <Points>\n";
    std::vector<double> pts;
    pts.reserve(3 * nn);
    for (const auto& x : mesh.node)
      for (int c = 0; c < 3; ++c) pts.push_back(x[c]);
    detail::write_data_array(os, "Points", 3, pts);
    os << "      </Points>\n";

    os << "      <Cells>\n        <DataArray type=\"Int32\" Name=\"connectivity\" format=\"ascii\">\n";
    static const int vtk_order[8] = {0, 1, 3, 2, 4, 5, 7, 6};
    for (const auto& c : mesh.conn) {
      for (int i = 0; i < 8; ++i) os << c[vtk_order[i]] << " ";
      os << "\n";
    }
    os << "        </DataArray>\n        <DataArray type=\"Int32\" Name=\"offsets\" format=\"ascii\">\n";
    for (int e = 1; e <= ne; ++e) os << 8 * e << (e % 12 == 0 ? "\n" : " ");
    os << "\n        </DataArray>\n        <DataArray type=\"UInt8\" Name=\"types\" format=\"ascii\">\n";
    for (int e = 0; e < ne; ++e) os << "12 ";
    os << "\n        </DataArray>\n      </Cells>\n";

    os << "      <PointData>\n";
    std::vector<double> disp(3 * nn), theta(nn), s(nn), sL(nn), sM(nn), alpha(nn), rp(nn), fvoid(nn, 0.0);
    for (int n = 0; n < nn; ++n) {
      const Vec3 u = sampler_.vector3(n, solver.displacement());
      for (int c = 0; c < 3; ++c) disp[3 * n + c] = u[c];
      theta[n] = sampler_.scalar(n, solver.temperature());
      s[n] = sampler_.scalar(n, solver.phase_fields().s);
      sL[n] = sampler_.scalar(n, solver.phase_fields().sL);
      sM[n] = sampler_.scalar(n, solver.phase_fields().sM);
      alpha[n] = solver.plastic_strain_field()[n];
      rp[n] = solver.resistance_field()[n];
    }
    // void fraction: per-node average of the adjacent elements' records
    {
      std::vector<int> counts(nn, 0);
      for (std::size_t e = 0; e < mesh.conn.size(); ++e) {
        double favg = 0.0;
        for (const auto& qr : solver.records()[e]) favg += qr.f;
        favg /= double(solver.records()[e].size());
        for (int i = 0; i < 8; ++i) {
          fvoid[mesh.conn[e][i]] += favg;
          counts[mesh.conn[e][i]]++;
        }
      }
      for (int n = 0; n < nn; ++n)
        if (counts[n]) fvoid[n] /= counts[n];
    }
    (void)patch;
    detail::write_data_array(os, "displacement", 3, disp);
    detail::write_data_array(os, "theta", 1, theta);
    detail::write_data_array(os, "alpha", 1, alpha);
    detail::write_data_array(os, "r_p", 1, rp);
    detail::write_data_array(os, "void_fraction", 1, fvoid);
    detail::write_data_array(os, "s", 1, s);
    detail::write_data_array(os, "s_L", 1, sL);
    detail::write_data_array(os, "s_M", 1, sM);
    os << "      </PointData>\n    </Piece>\n  </UnstructuredGrid>\n</VTKFile>\n";
  }

 private:
  std::string dir_;
  detail::NodeSampler sampler_;
  std::ofstream csv_;
  std::ofstream events_;
  std::map<std::string, std::pair<double, double>> fired_;
};

}  // namespace frpfrac
