// Uses close, which is outside the supported subset.
// Expected: unsupported
package main

func main() {
	ch := make(chan int)
	close(ch)
}
