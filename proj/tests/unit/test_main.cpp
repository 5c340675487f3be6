#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "concierge/log.hpp"

int main(int argc, char** argv) {
  // Keep expected warnings out of the test output.
  concierge::log::set_sink([](concierge::log::Level, std::string_view) {});
  doctest::Context context(argc, argv);
  return context.run();
}
