#include "slcp/cli_io.hpp"

int main(int argc, char** argv) {
    return slcp::io::run_cli(argc, argv);
}
