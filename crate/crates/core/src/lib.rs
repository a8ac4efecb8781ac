//! Tambara functors built from semi-Mackey functors over finite groups: class rings of labeled
//! G-sets with restriction, transfer and norm, together with crossed Burnside rings, rings of
//! G-strings, Witt-Burnside rings and tables of marks, and checkers for the axioms relating them.

pub mod adjunction;
pub mod axioms;
pub mod burnside;
pub mod cli;
pub mod crossed;
pub mod diagram;
pub mod group;
pub mod gset;
pub mod mackey;
pub mod marks;
pub mod monoid;
pub mod random;
pub mod ring;
pub mod strings;
pub mod tambarize;
pub mod witt;
