#include "seizureml/cli.hpp"

int main(int argc, char** argv) { return seizureml::cli_main(argc, argv); }
