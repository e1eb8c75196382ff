#include <catch_amalgamated.hpp>

#include "gtoci/blas_guard.hpp"

int main(int argc, char** argv) {
  gtoci::ensure_reliable_blas(argc, argv);
  return Catch::Session().run(argc, argv);
}
