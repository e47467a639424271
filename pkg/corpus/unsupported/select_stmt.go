// Uses select, which is outside the supported subset.
// Expected: unsupported
package main

func main() {
	ch := make(chan int)
	select {
	case v := <-ch:
		_ = v
	}
}
