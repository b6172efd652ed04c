#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include "criteria.hpp"

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--criterion N]\n";
            return 2;
        }
    }
    bool all = true, found = false;
    for (const auto& c : acceptance::criteria()) {
        if (only != 0 && c.id != only) continue;
        found = true;
        acceptance::Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << " AC" << c.id << " " << c.title << " | " << v.detail << std::endl;
        all = all && v.pass;
    }
    if (!found) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    return all ? 0 : 1;
}
