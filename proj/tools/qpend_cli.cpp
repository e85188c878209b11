#include <qpend/cli.hpp>

int main(int argc, char** argv) { return qpend::cli::run(argc, argv); }
