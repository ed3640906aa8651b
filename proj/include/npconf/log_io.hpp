#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "npconf/event_log.hpp"
#include "npconf/projection.hpp"

namespace npconf {

inline constexpr std::string_view kLogSchema = "npnet-log/1";
inline constexpr std::string_view kSystemLogSchema = "npnet-system-log/1";

/// Throws ParseError (with line and column) on malformed text, unknown event
/// types, repeated sync participants, frequencies below one and data values
/// outside the declared domains. Repeated traces add up.
EventLog parse_log(std::string_view text);

/// Canonical form: traces in ascending order, sets sorted, fixed key order.
std::string serialize_log(const EventLog& log);

/// The projected system log. Agent names and data values are kept apart.
std::string serialize_system_log(const Multiset<SystemTrace>& log);
Multiset<SystemTrace> parse_system_log(std::string_view text);

/// An agent's projected log in the ordinary log schema (agent events only).
std::string serialize_agent_log(const AgentName& agent, const Multiset<AgentTrace>& log);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace npconf
