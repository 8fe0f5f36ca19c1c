#include "msrpa/trace_io.hpp"

#include <charconv>
#include <ostream>

#include "msrpa/metrics.hpp"

namespace msrpa {

std::string format_real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const Trace& tr) {
  const auto& sc = tr.scenario;
  const std::size_t n = sc.graph.size();
  std::vector<std::string> roles(n);
  std::vector<std::string> behaviors(n);
  for (const auto& s : initial_states(sc)) {
    roles[s.id] = role_name(s.role);
    behaviors[s.id] = behavior_tag(s.behavior);
  }

  out << kTraceCsvHeader << '\n';
  for (const auto& step : tr.steps) {
    for (AgentId i = 0; i < n; ++i) {
      const auto& a = step.agents[i];
      out << step.t << ',' << i << ',' << roles[i] << ',' << behaviors[i] << ','
          << format_real(a.x) << ',' << format_real(a.u) << ',' << (a.in_c ? 1 : 0)
          << ',';
      if (a.accepted) out << format_real(*a.accepted);
      out << '\n';
    }
  }
}

void write_messages_csv(std::ostream& out, const Trace& tr) {
  out << kMessagesCsvHeader << '\n';
  for (const auto& step : tr.steps) {
    for (const auto& m : step.messages) {
      out << m.t << ',' << m.sender << ',' << m.receiver << ',' << format_real(m.value)
          << '\n';
    }
  }
}

void write_metrics_csv(std::ostream& out, const Trace& tr) {
  const auto e = error_series(tr);
  const auto v = lyapunov_series(tr);
  out << kMetricsCsvHeader << '\n';
  std::size_t next = 0;
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    out << tr.steps[k].t << ',' << format_real(e[k]) << ',';
    if (next < v.size() && v[next].t == tr.steps[k].t) {
      out << v[next].tau << ',' << format_real(v[next].value);
      ++next;
    } else {
      out << ',';
    }
    out << '\n';
  }
}

}  // namespace msrpa
