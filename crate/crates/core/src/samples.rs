//! Small MiniC programs shared by tests and documentation.

/// Recursive product function with preserved comments; the running
/// example for lexical and syntactic feature extraction.
pub const RECURSIVE_FOO: &str = "int foo(int a){
  int b;
  if (a < 2)      // base case
    return 1;
  b = foo(a - 1); // recursion
  return a * b;
}
";

/// The same function plus a driver `main` reading nothing and printing
/// `foo(3)`.
pub const RECURSIVE_FOO_WITH_MAIN: &str = "int foo(int a){
  int b;
  if (a < 2)      // base case
    return 1;
  b = foo(a - 1); // recursion
  return a * b;
}

int main() {
  output << foo(3);
  return 0;
}
";

/// A for-loop summing 0..x with stream output: the two-step attack
/// walkthrough program (loop conversion, then output API conversion).
pub const LOOP_SUM: &str = "#include <iostream>

int main() {
    int x;
    input >> x;
    int s = 0;
    for (int i = 0; i < x; i++) {
        s = s + i;
    }
    output << s << \"\\n\";
    return 0;
}
";
