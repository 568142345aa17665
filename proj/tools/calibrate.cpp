// Re-derives data/calibration.json at s = 2 - sqrt(3) and prints it.
#include "w9/periods.hpp"

#include <iostream>

int main() {
    std::cout << w9::calibration_to_json(w9::calibrate());
    return 0;
}
