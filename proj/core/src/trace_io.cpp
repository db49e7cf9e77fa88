#include "switchquad/trace_io.hpp"

#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "switchquad/error.hpp"

namespace switchquad::io {
namespace {

void put(std::string& line, double v) { fmt::format_to(std::back_inserter(line), ",{:.17g}", v); }

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

Vec4 tracking_error_report(const sim::TraceRecord& rec) {
  Vec4 e = rec.state.q - rec.desired.q;
  e.tail<3>() *= kRadToDeg;
  return e;
}

}  // namespace

std::string trace_header(std::size_t mode_count) {
  std::string h = "t,z,phi,theta,psi,x,y,e_z,e_phi_deg,e_theta_deg,e_psi_deg";
  for (int i = 0; i < 4; ++i) h += fmt::format(",r{}", i);
  for (int i = 0; i < 4; ++i) h += fmt::format(",tau{}", i);
  h += ",rho,sigma";
  for (std::size_t m = 1; m <= mode_count; ++m) {
    for (int i = 0; i < 4; ++i) h += fmt::format(",thetahat{}{}", m, i);
  }
  for (std::size_t m = 1; m <= mode_count; ++m) h += fmt::format(",zeta{}", m);
  for (std::size_t m = 1; m <= mode_count; ++m) h += fmt::format(",gamma{}", m);
  h += ",Vquad";
  return h;
}

void write_trace_csv(std::ostream& out, const sim::SimTrace& trace) {
  out << trace_header(trace.modes.size()) << '\n';
  std::string line;
  for (const auto& rec : trace.records) {
    line = fmt::format("{:.17g}", rec.t);
    for (int i = 0; i < 4; ++i) put(line, rec.state.q[i]);
    put(line, rec.state.q_u[0]);
    put(line, rec.state.q_u[1]);
    const Vec4 e = tracking_error_report(rec);
    for (int i = 0; i < 4; ++i) put(line, e[i]);
    for (int i = 0; i < 4; ++i) put(line, rec.r[i]);
    for (int i = 0; i < 4; ++i) put(line, rec.tau[i]);
    put(line, rec.rho);
    fmt::format_to(std::back_inserter(line), ",{}", rec.sigma + 1);
    for (const auto& g : rec.gains) {
      for (int i = 0; i < 4; ++i) put(line, g.theta_hat[i]);
    }
    for (const auto& g : rec.gains) put(line, g.zeta);
    for (const auto& g : rec.gains) put(line, g.gamma);
    put(line, rec.v_quad);
    out << line << '\n';
  }
}

std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& dir,
                                                   const sim::SimTrace& trace) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;

  {
    written.push_back(dir / "errors.csv");
    auto out = open(written.back());
    out << "t,e_z,e_phi_deg,e_theta_deg,e_psi_deg\n";
    for (const auto& rec : trace.records) {
      const Vec4 e = tracking_error_report(rec);
      out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", rec.t, e[0], e[1], e[2], e[3]);
    }
  }

  for (std::size_t m = 0; m < trace.modes.size(); ++m) {
    written.push_back(dir / fmt::format("gains_mode{}.csv", m + 1));
    auto out = open(written.back());
    out << "t,active,thetahat0,thetahat1,thetahat2,thetahat3,zeta,gamma\n";
    for (const auto& rec : trace.records) {
      const auto& g = rec.gains[m];
      out << fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", rec.t,
                         rec.sigma == m ? 1 : 0, g.theta_hat[0], g.theta_hat[1], g.theta_hat[2],
                         g.theta_hat[3], g.zeta, g.gamma);
    }
  }

  {
    written.push_back(dir / "switching.csv");
    auto out = open(written.back());
    out << "t,sigma\n";
    const auto& recs = trace.records;
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const bool edge = k == 0 || k + 1 == recs.size() || recs[k].sigma != recs[k - 1].sigma;
      if (edge) out << fmt::format("{:.17g},{}\n", recs[k].t, recs[k].sigma + 1);
    }
  }

  {
    written.push_back(dir / "disturbance.csv");
    auto out = open(written.back());
    out << "t,d0,d1,d2,d3\n";
    for (const auto& rec : trace.records) {
      const Vec4& d = rec.disturbance;
      out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", rec.t, d[0], d[1], d[2], d[3]);
    }
  }
  return written;
}

}  // namespace switchquad::io
