#include <cstdio>

int main() {
    std::puts("fnls: subcommands not wired yet");
    return 1;
}
