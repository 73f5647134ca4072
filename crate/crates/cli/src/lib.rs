//! CLI placeholder; filled in alongside the library.

pub fn run() -> i32 {
    eprintln!("not yet wired");
    2
}
