#pragma once

#include <filesystem>
#include <string>

#include "npconf/event_log.hpp"
#include "npconf/log_io.hpp"
#include "npconf/model_io.hpp"

#ifndef NPCONF_FIXTURE_DIR
#error "NPCONF_FIXTURE_DIR must be defined"
#endif

namespace npconf::test_support {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(NPCONF_FIXTURE_DIR) / name;
}

inline NestedNet assistant_engine() { return load_model(read_file(fixture("assistant_engine.model.json"))); }
inline NestedNet booking() { return load_model(read_file(fixture("booking.model.json"))); }
inline EventLog assistant_log() { return parse_log(read_file(fixture("assistant.log.json"))); }
inline EventLog booking_log() { return parse_log(read_file(fixture("booking.log.json"))); }

}  // namespace npconf::test_support
