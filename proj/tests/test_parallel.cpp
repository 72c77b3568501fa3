#include <doctest.h>

#include "lps/parallel.hpp"

#include <cmath>
#include <vector>

using namespace lps;

TEST_CASE("parallel loops write one slot per index") {
    const std::ptrdiff_t n = 10007;
    std::vector<double> a(n), b(n), c(n);
    auto body = [](std::vector<double>& out) {
        return [&out](std::ptrdiff_t i) { out[i] = std::sin(0.001 * static_cast<double>(i)) * std::exp(-1e-4 * i); };
    };
    for_each_index(Execution::serial, n, body(a));
    for_each_index(Execution::parallel, n, body(b));
    for_each_index_static(Execution::parallel, n, body(c));
    CHECK(a == b);
    CHECK(a == c);
    CHECK(max_threads() >= 1);
}

TEST_CASE("empty and single-index loops") {
    int calls = 0;
    for_each_index(Execution::parallel, 0, [&](std::ptrdiff_t) { ++calls; });
    CHECK(calls == 0);
    for_each_index(Execution::parallel, 1, [&](std::ptrdiff_t) { ++calls; });
    CHECK(calls == 1);
}
