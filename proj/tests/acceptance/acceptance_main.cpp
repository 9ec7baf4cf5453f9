#include "acceptance.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <vector>

namespace acceptance {

namespace {
std::vector<Criterion>& registry() {
    static std::vector<Criterion> r;
    return r;
}
} // namespace

void register_criterion(Criterion c) { registry().push_back(std::move(c)); }

int run_all() {
    auto& all = registry();
    std::sort(all.begin(), all.end(),
              [](const Criterion& a, const Criterion& b) { return a.number < b.number; });
    int failures = 0;
    for (auto& c : all) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", c.number,
                    c.title.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) failures++;
    }
    std::printf("%zu criteria, %d failed\n", all.size(), failures);
    return failures == 0 ? 0 : 1;
}

} // namespace acceptance

int main() { return acceptance::run_all(); }
