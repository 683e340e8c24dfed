pub mod algebra;
pub mod certify;
pub mod cli;
pub mod factor;
pub mod frontend;
pub mod gen;
pub mod hensel;
pub mod oracle;
pub mod reconstruct;
pub mod rng;
pub mod unifit;
