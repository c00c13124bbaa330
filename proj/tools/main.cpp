#include "cli_app.hpp"

int main(int argc, char** argv) { return mmse_lab::cli::run(argc, argv); }
