#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return restrict4::app::run(argc, argv, std::cout, std::cerr); }
