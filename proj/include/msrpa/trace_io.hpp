#pragma once

#include <iosfwd>
#include <string>

#include "msrpa/engine.hpp"

namespace msrpa {

inline constexpr const char* kTraceCsvHeader =
    "t,agent_id,role,behavior,x,u,in_c,accepted_value";
inline constexpr const char* kMessagesCsvHeader = "t,sender,receiver,value";
inline constexpr const char* kMetricsCsvHeader = "t,e,tau,V";

/// Shortest decimal that parses back to the same double.
std::string format_real(double v);

/// One row per agent per recorded step.
void write_trace_csv(std::ostream& out, const Trace& tr);

/// One row per message.
void write_messages_csv(std::ostream& out, const Trace& tr);

/// One row per recorded step; tau and V are filled only at update instants.
void write_metrics_csv(std::ostream& out, const Trace& tr);

}  // namespace msrpa
