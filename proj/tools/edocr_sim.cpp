#include "edocr/scenario.hpp"

int main(int argc, char** argv) {
    return edocr::run_cli(argc, argv);
}
