#include <cstdio>

#include "mfis/mfis.hpp"

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::printf("mfis: not yet wired\n");
    return 1;
}
