// Pattern P13 (NoSender): a receive is attempted, but nothing ever sends.
// Expected: deadlock
package main

import "fmt"

func main() {
	ch := make(chan int)
	fmt.Println(<-ch)
}
