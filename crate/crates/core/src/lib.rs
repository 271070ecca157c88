pub mod algebra;
pub mod groupoid;
pub mod laws;
pub mod trackcat;
pub mod linearity;
pub mod fixtures;
pub mod freecat;
pub mod pseudo;
pub mod strictify;
pub mod brackets;
