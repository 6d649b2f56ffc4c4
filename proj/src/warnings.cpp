#include "circlot/warnings.hpp"

#include <atomic>
#include <iostream>

namespace circlot {

namespace {

void default_handler(const std::string& message) {
  std::cerr << "warning: " << message << "\n";
}

std::atomic<WarningHandler> g_handler{&default_handler};

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  return g_handler.exchange(handler ? handler : &default_handler);
}

void emit_warning(const std::string& message) {
  g_handler.load()(message);
}

}  // namespace circlot
