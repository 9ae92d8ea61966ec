//! Parse an expression, evaluate it and its gradient, print its canonical form.

use kkt_cert::expr::Expr;

fn main() {
    let e = Expr::parse("x1^2 * exp(x2) - log(x1 + x2)", 2).expect("valid expression");
    let x = [1.5, 0.5];
    let g = e.gradient(&x).expect("inside the domain");
    println!("expression: {e}");
    println!("value at {x:?}: {}", g.value);
    println!("gradient: {:?}", g.grad);

    match e.evaluate(&[-1.0, 0.5]) {
        Ok(v) => println!("value at (-1, 0.5): {v}"),
        Err(err) => println!("domain error at (-1, 0.5): {err}"),
    }
}
