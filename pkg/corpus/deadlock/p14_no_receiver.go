// Pattern P14 (NoReceiver): a send is attempted, but nothing ever
// receives.
// Expected: deadlock
package main

func main() {
	ch := make(chan int)
	ch <- 1
}
