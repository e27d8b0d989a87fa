#include "lovo/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace lovo {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& sink() {
  static WarningSink s = [](std::string_view msg) {
    std::cerr << "lovo: warning: " << msg << '\n';
  };
  return s;
}

}  // namespace

WarningSink set_warning_sink(WarningSink new_sink) {
  std::lock_guard lock(sink_mutex());
  return std::exchange(sink(), std::move(new_sink));
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) sink()(message);
}

}  // namespace lovo
