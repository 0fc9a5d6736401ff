//! Value, gradient and Hessian of a parsed expression in one pass.
//!
//! cargo run --example jets -- "x1*cos(x2) + exp(x3)/x1" 1 0.5 2

use parageo::{eval_jet2, parse};

fn main() {
    let mut args = std::env::args().skip(1);
    let src = args.next().unwrap_or_else(|| "x1*cos(x2)".to_string());
    let mut p: Vec<f64> = args.map(|a| a.parse().expect("point coordinates are numbers")).collect();
    if p.is_empty() {
        p = vec![1.0, 0.0, 1.0];
    }
    let e = match parse(&src, p.len()) {
        Ok(e) => e,
        Err(err) => {
            eprintln!("{src}\n{}^ {err}", " ".repeat(err.offset()));
            std::process::exit(2);
        }
    };
    println!("expression  {e}");
    match eval_jet2(&e, &p) {
        Ok(j) => {
            println!("value       {}", j.value);
            println!("gradient    {:?}", j.grad.as_slice());
            print!("hessian{}", j.hess);
        }
        Err(err) => eprintln!("{err}"),
    }
}
